//! Command-line front end: circuit execution, channel analysis,
//! four-valued logic utilities and the built-in acceptance suites.

mod circuit;
mod error;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ququat::fourlogic::{synthesize, ClassicalGate, Connective, LogicExpr};

use crate::circuit::{parse_analyze_payload, parse_circuit, run_circuit, RunReport};
use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "ququat",
    version,
    about = "Mixed-state circuit simulator on Pauli coefficient vectors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Default, ValueEnum)]
enum Format {
    /// Pretty-printed JSON report.
    #[default]
    Json,
    /// Aligned plain-text columns.
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Execute circuit files and print run reports.
    Run {
        /// Circuit files in the JSON schema (see docs/circuit_schema.md).
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Replay every step on a dense density matrix and report the
        /// worst deviation; fails the run above the tolerance.
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Run the files on parallel workers (reports still print in
        /// argument order).
        #[arg(long)]
        suite: bool,
    },
    /// Classify a channel given as a unitary, Kraus list or transfer matrix.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Four-valued logic utilities.
    Logic {
        #[command(subcommand)]
        command: LogicCommand,
    },
    /// Run the built-in acceptance suites and exit nonzero on failure.
    Selftest {
        /// Seed for the randomised suites.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum LogicCommand {
    /// Compile a single-variable expression to its truth table and gate.
    Compile { expr: String },
    /// Search for an expression matching a truth table over a basis.
    Synth {
        /// Truth table as 4^k digits from {0,1,2,3}, inputs in
        /// lexicographic order.
        table: String,
        /// Comma-separated connective names, e.g. "neg,and,or".
        #[arg(long, value_delimiter = ',', required = true)]
        basis: Vec<String>,
        /// Maximum expression height to search.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run {
            files,
            verify,
            format,
            suite,
        } => run_files(&files, verify, format, suite),
        Command::Analyze { file, format } => analyze_file(&file, format),
        Command::Logic { command } => logic_command(command),
        Command::Selftest { seed } => selftest(seed),
    }
}

/// Executes one circuit file; returns the rendered report (when one was
/// produced) and the failure (when there was one) so suite mode can
/// print everything in order.
fn run_file(path: &Path, verify: bool, format: Format) -> (Option<String>, Option<CliError>) {
    let at = |e: CliError| CliError {
        code: e.code,
        message: format!("{}: {}", path.display(), e.message),
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return (None, Some(CliError::parse(format!("{}: {e}", path.display())))),
    };
    let parsed = match parse_circuit(&text) {
        Ok(c) => c,
        Err(e) => return (None, Some(at(e))),
    };
    let report = match run_circuit(&parsed, verify) {
        Ok(r) => r,
        Err(e) => return (None, Some(at(e))),
    };
    let rendered = render_run(&report, format);
    if let Some(v) = &report.verify {
        if v.max_residual > v.tolerance {
            let message = format!(
                "{}: dense replay residual {:.3e} exceeds tolerance {:.3e}",
                path.display(),
                v.max_residual,
                v.tolerance
            );
            return (Some(rendered), Some(CliError::verification(message)));
        }
    }
    (Some(rendered), None)
}

fn run_files(
    files: &[PathBuf],
    verify: bool,
    format: Format,
    suite: bool,
) -> Result<(), CliError> {
    let results: Vec<(Option<String>, Option<CliError>)> = if suite {
        std::thread::scope(|scope| {
            let handles: Vec<_> = files
                .iter()
                .map(|path| scope.spawn(move || run_file(path, verify, format)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    } else {
        files
            .iter()
            .map(|path| run_file(path, verify, format))
            .collect()
    };

    let mut errors: Vec<CliError> = Vec::new();
    for (path, (rendered, failure)) in files.iter().zip(results) {
        if files.len() > 1 {
            println!("--- {}", path.display());
        }
        if let Some(text) = rendered {
            println!("{text}");
        }
        if let Some(e) = failure {
            if files.len() > 1 {
                eprintln!("error: {e}");
            }
            errors.push(e);
        }
    }
    if errors.is_empty() {
        Ok(())
    } else if files.len() == 1 {
        Err(errors.pop().expect("one failure recorded"))
    } else {
        let code = errors.iter().map(|e| e.code).max().unwrap_or(1);
        Err(CliError {
            code,
            message: format!("{} of {} circuit(s) failed", errors.len(), files.len()),
        })
    }
}

fn render_run(report: &RunReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes"),
        Format::Table => report::run_table(report),
    }
}

fn analyze_file(path: &Path, format: Format) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let gate = parse_analyze_payload(&text)?;
    let analysis = report::analyze_gate(&gate);
    let rendered = match format {
        Format::Json => serde_json::to_string_pretty(&analysis).expect("report serializes"),
        Format::Table => report::analysis_table(&analysis),
    };
    println!("{rendered}");
    Ok(())
}

fn logic_command(command: LogicCommand) -> Result<(), CliError> {
    match command {
        LogicCommand::Compile { expr } => {
            let parsed: LogicExpr = expr
                .parse()
                .map_err(|e| CliError::parse(format!("expression: {e}")))?;
            let gate = circuit::compile_logic_expression(&parsed)
                .map_err(|m| CliError::parse(format!("expression: {m}")))?;
            let table: Vec<u8> = (0..4)
                .map(|x| {
                    parsed
                        .eval(&[x, x, x, x][..parsed.arity().max(1)])
                        .expect("arity checked")
                })
                .collect();
            println!("expression: {parsed}");
            println!("table: {:?}", table);
            println!("matrix:");
            for row in 0..4 {
                let cells: Vec<String> = (0..4)
                    .map(|col| format!("{:>6}", report::fmt_num(gate.matrix()[(row, col)])))
                    .collect();
                println!("  {}", cells.join(" "));
            }
            Ok(())
        }
        LogicCommand::Synth {
            table,
            basis,
            depth,
        } => {
            let digits: Vec<u8> = table
                .chars()
                .map(|c| match c {
                    '0'..='3' => Ok(c as u8 - b'0'),
                    other => Err(CliError::parse(format!(
                        "table: invalid digit {other:?}, expected 0-3"
                    ))),
                })
                .collect::<Result<_, _>>()?;
            let arity = match digits.len() {
                4 => 1,
                16 => 2,
                64 => 3,
                len => {
                    return Err(CliError::parse(format!(
                        "table: {len} entries is not 4^k for k in 1..=3"
                    )))
                }
            };
            let gate = ClassicalGate::new(arity, digits)
                .map_err(|e| CliError::parse(format!("table: {e}")))?;
            let connectives: Vec<Connective> = basis
                .iter()
                .map(|name| {
                    Connective::parse(name).ok_or_else(|| {
                        CliError::parse(format!("basis: unknown connective \"{name}\""))
                    })
                })
                .collect::<Result<_, _>>()?;
            let found = synthesize(&gate, &connectives, depth)
                .map_err(|e| CliError::parse(format!("synth: {e}")))?;
            match found {
                Some(expr) => println!("expression: {expr}"),
                None => println!("no expression up to height {depth} over this basis"),
            }
            Ok(())
        }
    }
}

fn selftest(seed: u64) -> Result<(), CliError> {
    let results = ququat::selftest::run_all(seed);
    let mut failed = 0;
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:2} [{verdict}] {:<38} ({:6.2} s) {}",
            r.id, r.name, r.seconds, r.details
        );
        if !r.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::verification(format!(
            "{failed} acceptance criterion(s) failed"
        )))
    }
}
