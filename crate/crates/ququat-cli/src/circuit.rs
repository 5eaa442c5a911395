//! Circuit file schema, step construction, subset embedding and the
//! execution engine behind `run`.

use serde::{Deserialize, Serialize};

use ququat::fourlogic::{compile_single, logic_state, min_max_gate, sheffer_webb_gate,
    ClassicalGate, LogicExpr};
use ququat::gatelib::{
    euler_gate, inversion, measurement_gate, pauli_gate, reflection, rotation1, rotation2,
    von_neumann_measure, EulerAngles,
};
use ququat::liouville::{density_to_pauli, pauli_to_density, PauliVector};
use ququat::oracle::{evolve_dense, measure_dense};
use ququat::superop::{
    apply, choi_from_ptm, is_completely_positive, is_orthogonal, is_trace_preserving, is_unital,
    kraus_from_choi, ptm_from_kraus, ptm_from_unitary, tensor, GateMatrix, KrausSet,
};
use ququat::{C64, CMat, RMat, RVec};

use crate::error::CliError;

/// Default bound on the dense-replay residual; overridable through the
/// QUQUAT_VERIFY_TOL environment variable.
pub const DEFAULT_VERIFY_TOL: f64 = 1e-9;

type ComplexEntry = [f64; 2];
type MatrixSpec = Vec<Vec<ComplexEntry>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    n: usize,
    #[serde(default)]
    initial: Option<InitialSpec>,
    ops: Vec<StepSpec>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum InitialSpec {
    /// Logic-state digits, one per ququat; the initial state is the
    /// tensor product of the single-ududat states |d].
    Digits(Vec<u8>),
    /// Explicit coefficient vector of length 4^n with leading entry 1.
    Pauli { pauli: Vec<f64> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StepSpec {
    #[serde(default)]
    gate: Option<String>,
    #[serde(default)]
    unitary: Option<MatrixSpec>,
    #[serde(default)]
    kraus: Option<Vec<MatrixSpec>>,
    #[serde(default)]
    measure: Option<String>,
    #[serde(default)]
    logic: Option<String>,
    targets: Vec<usize>,
    #[serde(default)]
    angle: Option<f64>,
    #[serde(default)]
    angles: Option<[f64; 3]>,
    #[serde(default)]
    branch: Option<usize>,
}

/// A validated, fully embedded circuit.
pub struct Circuit {
    n: usize,
    initial: PauliVector,
    steps: Vec<Step>,
}

enum StepAction {
    Gate(GateMatrix),
    Measure {
        projectors: Vec<CMat>,
        branch: Option<usize>,
    },
}

struct Step {
    description: String,
    targets: Vec<usize>,
    action: StepAction,
}

fn parse_matrix(spec: &MatrixSpec, what: &str) -> Result<CMat, CliError> {
    let rows = spec.len();
    if rows == 0 || spec.iter().any(|r| r.len() != rows) {
        return Err(CliError::parse(format!("{what}: matrix must be square and non-empty")));
    }
    Ok(CMat::from_fn(rows, rows, |r, c| {
        C64::new(spec[r][c][0], spec[r][c][1])
    }))
}

fn side_for_targets(count: usize) -> usize {
    1usize << count
}

fn named_gate(step: &StepSpec, index: usize) -> Result<GateMatrix, CliError> {
    let name = step.gate.as_deref().expect("caller checked");
    let parse = |what: &str| CliError::parse(format!("step {index}: {what}"));
    let angle = || {
        step.angle
            .ok_or_else(|| parse(&format!("gate {name} needs an \"angle\" field")))
    };
    let no_angles = |gate: Result<GateMatrix, CliError>| {
        if step.angle.is_some() || step.angles.is_some() {
            Err(parse(&format!("gate {name} takes no angle")))
        } else {
            gate
        }
    };
    let lib = |r: ququat::Result<GateMatrix>| r.map_err(|e| parse(&e.to_string()));
    match name.to_ascii_lowercase().as_str() {
        "i" | "id" => no_angles(Ok(GateMatrix::identity(1))),
        "x" => no_angles(lib(pauli_gate(1))),
        "y" => no_angles(lib(pauli_gate(2))),
        "z" => no_angles(lib(pauli_gate(3))),
        "h" | "hadamard" => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let u = CMat::from_row_slice(2, 2, &[
                C64::new(s, 0.0),
                C64::new(s, 0.0),
                C64::new(s, 0.0),
                C64::new(-s, 0.0),
            ]);
            no_angles(lib(ptm_from_unitary(&u)))
        }
        "rot1" => Ok(rotation1(angle()?)),
        "rot2" => Ok(rotation2(angle()?)),
        "euler" => {
            let [a, t, b] = step
                .angles
                .ok_or_else(|| parse("gate euler needs an \"angles\" triple"))?;
            Ok(euler_gate(EulerAngles::new(a, t, b)))
        }
        "inversion" => no_angles(Ok(inversion())),
        "reflection1" => no_angles(lib(reflection(1))),
        "reflection2" => no_angles(lib(reflection(2))),
        "reflection3" => no_angles(lib(reflection(3))),
        "measurement0" => no_angles(lib(measurement_gate(0))),
        "measurement1" => no_angles(lib(measurement_gate(1))),
        "min_max" => no_angles(Ok(min_max_gate())),
        "sheffer_webb" => no_angles(Ok(sheffer_webb_gate())),
        other => Err(parse(&format!("unknown gate name \"{other}\""))),
    }
}

/// Replaces the leading row with the exact unit row when the gate
/// already passes the trace-preservation check. Constructions that go
/// through complex arithmetic leave the row within rounding of the unit
/// row; snapping it makes P_0 = 1 hold exactly across every
/// trace-preserving step.
fn snap_trace_preserving(gate: GateMatrix) -> GateMatrix {
    if !is_trace_preserving(&gate) {
        return gate;
    }
    let mut m = gate.matrix().clone();
    for col in 0..m.ncols() {
        m[(0, col)] = if col == 0 { 1.0 } else { 0.0 };
    }
    GateMatrix::new(gate.n(), m).expect("dimensions unchanged")
}

/// Moves the target positions to the front, applies the gate tensored
/// with the identity, and permutes back: digit j of the reindexed Pauli
/// label is digit order[j] of the original, with order = targets then
/// the remaining positions ascending.
fn embed_gate(e: &GateMatrix, targets: &[usize], n: usize) -> GateMatrix {
    let k = e.n();
    let mut order: Vec<usize> = targets.to_vec();
    order.extend((0..n).filter(|pos| !targets.contains(pos)));
    let wide = if k == n {
        e.clone()
    } else {
        tensor(e, &GateMatrix::identity(n - k))
    };
    if order.iter().enumerate().all(|(j, &pos)| j == pos) {
        return wide;
    }
    let dim = 4usize.pow(n as u32);
    let digit = |mu: usize, j: usize| (mu >> (2 * (n - 1 - j))) & 3;
    let perm: Vec<usize> = (0..dim)
        .map(|mu| order.iter().fold(0, |acc, &pos| (acc << 2) | digit(mu, pos)))
        .collect();
    let full = RMat::from_fn(dim, dim, |a, b| wide.matrix()[(perm[a], perm[b])]);
    GateMatrix::new(n, full).expect("permutation preserves dimensions")
}

/// Computational-basis projectors on the target ququats, embedded in
/// the full 2^n-dimensional space. Outcome bit order follows the
/// target list, first target most significant.
fn computational_projectors(targets: &[usize], n: usize) -> Vec<CMat> {
    let k = targets.len();
    (0..side_for_targets(k))
        .map(|outcome| {
            let mut p = CMat::identity(1, 1);
            for pos in 0..n {
                let factor = match targets.iter().position(|&t| t == pos) {
                    Some(j) => {
                        let bit = (outcome >> (k - 1 - j)) & 1;
                        let mut proj = CMat::zeros(2, 2);
                        proj[(bit, bit)] = C64::new(1.0, 0.0);
                        proj
                    }
                    None => CMat::identity(2, 2),
                };
                p = p.kronecker(&factor);
            }
            p
        })
        .collect()
}

fn check_targets(targets: &[usize], n: usize, index: usize) -> Result<(), CliError> {
    if targets.is_empty() {
        return Err(CliError::parse(format!("step {index}: empty target list")));
    }
    for &t in targets {
        if t >= n {
            return Err(CliError::parse(format!(
                "step {index}: target {t} out of range for {n} ququats"
            )));
        }
    }
    for (a, &t) in targets.iter().enumerate() {
        if targets[..a].contains(&t) {
            return Err(CliError::parse(format!("step {index}: duplicate target {t}")));
        }
    }
    Ok(())
}

fn build_step(spec: &StepSpec, n: usize, index: usize) -> Result<Step, CliError> {
    check_targets(&spec.targets, n, index)?;
    let payloads = [
        spec.gate.is_some(),
        spec.unitary.is_some(),
        spec.kraus.is_some(),
        spec.measure.is_some(),
        spec.logic.is_some(),
    ];
    if payloads.iter().filter(|p| **p).count() != 1 {
        return Err(CliError::parse(format!(
            "step {index}: exactly one of gate/unitary/kraus/measure/logic required"
        )));
    }
    if spec.branch.is_some() && spec.measure.is_none() {
        return Err(CliError::parse(format!(
            "step {index}: \"branch\" applies to measurement steps only"
        )));
    }
    let k = spec.targets.len();
    let side = side_for_targets(k);

    let (description, local) = if let Some(name) = &spec.gate {
        let gate = named_gate(spec, index)?;
        if gate.n() != k {
            return Err(CliError::parse(format!(
                "step {index}: gate {name} acts on {} ququats, got {k} targets",
                gate.n()
            )));
        }
        (format!("gate {}", name.to_ascii_lowercase()), gate)
    } else if let Some(matrix) = &spec.unitary {
        let u = parse_matrix(matrix, &format!("step {index} unitary"))?;
        if u.nrows() != side {
            return Err(CliError::parse(format!(
                "step {index}: unitary is {}x{}, expected {side}x{side} for {k} targets",
                u.nrows(),
                u.ncols()
            )));
        }
        let gate = ptm_from_unitary(&u)
            .map_err(|e| CliError::parse(format!("step {index}: {e}")))?;
        ("unitary".to_string(), gate)
    } else if let Some(list) = &spec.kraus {
        let ops = list
            .iter()
            .map(|m| parse_matrix(m, &format!("step {index} Kraus operator")))
            .collect::<Result<Vec<_>, _>>()?;
        if ops.iter().any(|m| m.nrows() != side) {
            return Err(CliError::parse(format!(
                "step {index}: Kraus operators must be {side}x{side} for {k} targets"
            )));
        }
        let set = KrausSet::new(k, ops)
            .map_err(|e| CliError::parse(format!("step {index}: {e}")))?;
        if !set.is_trace_preserving() {
            return Err(CliError::parse(format!(
                "step {index}: Kraus operators do not sum to a trace-preserving channel"
            )));
        }
        let gate = ptm_from_kraus(&set)
            .map_err(|e| CliError::parse(format!("step {index}: {e}")))?;
        (format!("kraus channel ({} operators)", set.ops().len()), gate)
    } else if let Some(expr) = &spec.logic {
        let parsed: LogicExpr = expr
            .parse()
            .map_err(|e| CliError::parse(format!("step {index}: {e}")))?;
        let gate = compile_logic_expression(&parsed)
            .map_err(|m| CliError::parse(format!("step {index}: {m}")))?;
        if k != 1 {
            return Err(CliError::parse(format!(
                "step {index}: logic expressions act on exactly 1 target"
            )));
        }
        (format!("logic {parsed}"), gate)
    } else {
        let basis = spec.measure.as_deref().expect("caller checked");
        if basis != "computational" {
            return Err(CliError::parse(format!(
                "step {index}: unsupported measurement basis \"{basis}\""
            )));
        }
        let projectors = computational_projectors(&spec.targets, n);
        if let Some(b) = spec.branch {
            if b >= projectors.len() {
                return Err(CliError::parse(format!(
                    "step {index}: branch {b} out of range for {} outcomes",
                    projectors.len()
                )));
            }
        }
        return Ok(Step {
            description: format!("measure computational on {:?}", spec.targets),
            targets: spec.targets.clone(),
            action: StepAction::Measure {
                projectors,
                branch: spec.branch,
            },
        });
    };

    Ok(Step {
        description: format!("{description} on {:?}", spec.targets),
        targets: spec.targets.clone(),
        action: StepAction::Gate(embed_gate(
            &snap_trace_preserving(local),
            &spec.targets,
            n,
        )),
    })
}

/// Compiles a single-variable expression into its 4x4 gate; constants
/// are promoted to constant gates.
pub fn compile_logic_expression(expr: &LogicExpr) -> Result<GateMatrix, String> {
    let gate = ClassicalGate::from_expr(expr).map_err(|e| e.to_string())?;
    let gate = match gate.arity() {
        0 => ClassicalGate::new(1, vec![gate.table()[0]; 4]).map_err(|e| e.to_string())?,
        1 => gate,
        a => {
            return Err(format!(
                "expression has {a} variables; only single-variable expressions compile to a gate"
            ))
        }
    };
    compile_single(&gate).map_err(|e| e.to_string())
}

/// Parses and validates a circuit file.
pub fn parse_circuit(text: &str) -> Result<Circuit, CliError> {
    let file: CircuitFile =
        serde_json::from_str(text).map_err(|e| CliError::parse(format!("circuit: {e}")))?;
    if file.n == 0 || file.n > 8 {
        return Err(CliError::parse(format!(
            "ququat count {} outside the supported range 1..=8",
            file.n
        )));
    }
    let initial = match &file.initial {
        None => logic_state(&vec![0; file.n]),
        Some(InitialSpec::Digits(digits)) => {
            if digits.len() != file.n {
                return Err(CliError::parse(format!(
                    "initial state lists {} digits for {} ququats",
                    digits.len(),
                    file.n
                )));
            }
            logic_state(digits)
        }
        Some(InitialSpec::Pauli { pauli }) => {
            PauliVector::state(file.n, RVec::from_column_slice(pauli))
        }
    }
    .map_err(|e| CliError::parse(format!("initial state: {e}")))?;

    let steps = file
        .ops
        .iter()
        .enumerate()
        .map(|(index, spec)| build_step(spec, file.n, index))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Circuit {
        n: file.n,
        initial,
        steps,
    })
}

#[derive(Debug, Serialize)]
pub struct StepReport {
    pub index: usize,
    pub description: String,
    pub trace_preserving: bool,
    pub unital: bool,
    pub completely_positive: bool,
    pub orthogonal: bool,
}

#[derive(Debug, Serialize)]
pub struct MeasurementRecord {
    pub step: usize,
    pub targets: Vec<usize>,
    pub probabilities: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub max_residual: f64,
    pub tolerance: f64,
    pub steps_verified: usize,
    pub steps_skipped: usize,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub n: usize,
    pub final_state: Vec<f64>,
    pub steps: Vec<StepReport>,
    pub measurements: Vec<MeasurementRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
}

struct DenseTracker {
    rho: ququat::liouville::DensityMatrix,
    max_residual: f64,
    verified: usize,
    skipped: usize,
}

impl DenseTracker {
    fn residual(&mut self, p: &PauliVector) -> Result<(), CliError> {
        let dense_p = density_to_pauli(&self.rho).map_err(CliError::internal)?;
        let diff = (p.coeffs() - dense_p.coeffs()).amax();
        self.max_residual = self.max_residual.max(diff);
        Ok(())
    }
}

/// Runs a parsed circuit; `verify` replays every completely positive
/// step on a dense density matrix and records the worst deviation.
pub fn run_circuit(circuit: &Circuit, verify: bool) -> Result<RunReport, CliError> {
    let mut p = circuit.initial.clone();
    let mut tracker = if verify {
        let (rho, _) = pauli_to_density(&p).map_err(CliError::internal)?;
        Some(DenseTracker {
            rho,
            max_residual: 0.0,
            verified: 0,
            skipped: 0,
        })
    } else {
        None
    };
    let mut steps = Vec::new();
    let mut measurements = Vec::new();

    for (index, step) in circuit.steps.iter().enumerate() {
        match &step.action {
            StepAction::Gate(gate) => {
                steps.push(classify(index, &step.description, gate));
                p = apply(gate, &p).map_err(CliError::internal)?;
                if let Some(t) = tracker.as_mut() {
                    if is_completely_positive(gate) {
                        let kraus = kraus_from_choi(&choi_from_ptm(gate))
                            .map_err(CliError::internal)?;
                        t.rho = evolve_dense(&kraus, &t.rho).map_err(CliError::internal)?;
                        t.verified += 1;
                        t.residual(&p)?;
                    } else {
                        t.skipped += 1;
                        t.rho = pauli_to_density(&p).map_err(CliError::internal)?.0;
                    }
                }
            }
            StepAction::Measure { projectors, branch } => {
                let m = von_neumann_measure(projectors, &p).map_err(CliError::internal)?;
                let summed = summed_projector_gate(projectors, circuit.n, branch)?;
                steps.push(classify(index, &step.description, &summed));
                measurements.push(MeasurementRecord {
                    step: index,
                    targets: step.targets.clone(),
                    probabilities: m.probabilities.clone(),
                    branch: *branch,
                });
                p = match branch {
                    None => m.post_state,
                    Some(b) => m.branch_states[*b].clone().ok_or_else(|| {
                        CliError::runtime(format!(
                            "step {index}: branch {b} has probability {:.3e}, no conditional state",
                            m.probabilities[*b]
                        ))
                    })?,
                };
                if let Some(t) = tracker.as_mut() {
                    match branch {
                        None => {
                            let (probs, post) =
                                measure_dense(projectors, &t.rho).map_err(CliError::internal)?;
                            for (a, b) in m.probabilities.iter().zip(&probs) {
                                t.max_residual = t.max_residual.max((a - b).abs());
                            }
                            t.rho = post;
                        }
                        Some(b) => {
                            let proj = &projectors[*b];
                            let kept = proj * t.rho.matrix() * proj;
                            let prob = kept.trace().re;
                            t.max_residual =
                                t.max_residual.max((m.probabilities[*b] - prob).abs());
                            t.rho = ququat::liouville::DensityMatrix::new(
                                kept / C64::new(prob, 0.0),
                            )
                            .map_err(CliError::internal)?;
                        }
                    }
                    t.verified += 1;
                    t.residual(&p)?;
                }
            }
        }
    }

    let verify = tracker.map(|t| VerifyReport {
        max_residual: t.max_residual,
        tolerance: verify_tolerance(),
        steps_verified: t.verified,
        steps_skipped: t.skipped,
    });
    Ok(RunReport {
        n: circuit.n,
        final_state: p.coeffs().iter().copied().collect(),
        steps,
        measurements,
        verify,
    })
}

/// Residual tolerance for --verify, from QUQUAT_VERIFY_TOL when set.
pub fn verify_tolerance() -> f64 {
    std::env::var("QUQUAT_VERIFY_TOL")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_VERIFY_TOL)
}

fn classify(index: usize, description: &str, gate: &GateMatrix) -> StepReport {
    StepReport {
        index,
        description: description.to_string(),
        trace_preserving: is_trace_preserving(gate),
        unital: is_unital(gate),
        completely_positive: is_completely_positive(gate),
        orthogonal: is_orthogonal(gate),
    }
}

/// The gate whose classification a measurement step reports: the summed
/// projector superoperator for ensemble measurements, the selected
/// projector's gate for branch measurements.
fn summed_projector_gate(
    projectors: &[CMat],
    n: usize,
    branch: &Option<usize>,
) -> Result<GateMatrix, CliError> {
    let build = |list: &[CMat]| -> Result<GateMatrix, CliError> {
        let dim = 4usize.pow(n as u32);
        let mut sum = RMat::zeros(dim, dim);
        for proj in list {
            let gate =
                ququat::gatelib::projector_gate(proj).map_err(CliError::internal)?;
            sum += gate.matrix();
        }
        GateMatrix::new(n, sum).map_err(CliError::internal)
    };
    match branch {
        None => build(projectors),
        Some(b) => build(&projectors[*b..=*b]),
    }
}

/// Parses the payload accepted by `analyze`: one of {"unitary": M},
/// {"kraus": [M...]}, {"ptm": rows}.
pub fn parse_analyze_payload(text: &str) -> Result<GateMatrix, CliError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Payload {
        #[serde(default)]
        unitary: Option<MatrixSpec>,
        #[serde(default)]
        kraus: Option<Vec<MatrixSpec>>,
        #[serde(default)]
        ptm: Option<Vec<Vec<f64>>>,
    }
    let payload: Payload =
        serde_json::from_str(text).map_err(|e| CliError::parse(format!("payload: {e}")))?;
    let given = [
        payload.unitary.is_some(),
        payload.kraus.is_some(),
        payload.ptm.is_some(),
    ];
    if given.iter().filter(|p| **p).count() != 1 {
        return Err(CliError::parse(
            "payload: exactly one of unitary/kraus/ptm required".into(),
        ));
    }
    if let Some(matrix) = &payload.unitary {
        let u = parse_matrix(matrix, "unitary")?;
        return ptm_from_unitary(&u).map_err(|e| CliError::parse(format!("unitary: {e}")));
    }
    if let Some(list) = &payload.kraus {
        let ops = list
            .iter()
            .map(|m| parse_matrix(m, "Kraus operator"))
            .collect::<Result<Vec<_>, _>>()?;
        let side = ops.first().map_or(0, |m| m.nrows());
        if side == 0 || !side.is_power_of_two() {
            return Err(CliError::parse(
                "Kraus operators must have power-of-two side".into(),
            ));
        }
        let set = KrausSet::new(side.trailing_zeros() as usize, ops)
            .map_err(|e| CliError::parse(format!("kraus: {e}")))?;
        if !set.is_trace_decreasing() {
            return Err(CliError::parse(
                "kraus: operators exceed the trace-decreasing completeness bound".into(),
            ));
        }
        return ptm_from_kraus(&set).map_err(|e| CliError::parse(format!("kraus: {e}")));
    }
    let rows = payload.ptm.expect("one payload present");
    let dim = rows.len();
    if dim == 0 || rows.iter().any(|r| r.len() != dim) {
        return Err(CliError::parse("ptm: matrix must be square and non-empty".into()));
    }
    let quarter = dim.trailing_zeros() as usize;
    if dim < 4 || !dim.is_power_of_two() || quarter % 2 != 0 {
        return Err(CliError::parse(format!("ptm: side {dim} is not a power of 4")));
    }
    let m = RMat::from_fn(dim, dim, |r, c| rows[r][c]);
    GateMatrix::new(quarter / 2, m).map_err(|e| CliError::parse(format!("ptm: {e}")))
}
