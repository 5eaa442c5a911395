//! Channel analysis and plain-text rendering of reports.

use serde::Serialize;

use ququat::canon::svd_decompose;
use ququat::superop::{
    choi_from_ptm, is_completely_positive, is_orthogonal, is_trace_preserving, is_unital,
    satisfies_trace_decreasing_bound, GateMatrix,
};

use crate::circuit::RunReport;

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub trace_preserving: bool,
    pub unital: bool,
    pub completely_positive: bool,
    pub orthogonal: bool,
    pub within_trace_decreasing_bound: bool,
    pub min_choi_eigenvalue: f64,
    pub translation: Vec<f64>,
    /// Present for trace-preserving maps only; the decomposition needs
    /// the affine form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_values: Option<Vec<f64>>,
}

pub fn analyze_gate(e: &GateMatrix) -> AnalysisReport {
    let singular_values = svd_decompose(e)
        .ok()
        .map(|d| d.singular_values().iter().copied().collect());
    AnalysisReport {
        n: e.n(),
        trace_preserving: is_trace_preserving(e),
        unital: is_unital(e),
        completely_positive: is_completely_positive(e),
        orthogonal: is_orthogonal(e),
        within_trace_decreasing_bound: satisfies_trace_decreasing_bound(e),
        min_choi_eigenvalue: choi_from_ptm(e).min_eigenvalue(),
        translation: e.translation().iter().copied().collect(),
        singular_values,
    }
}

/// Compact decimal for table cells; scientific notation outside
/// comfortable magnitudes.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if (1e-4..1e7).contains(&a) {
        let s = format!("{x:.6}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{x:.3e}")
    }
}

pub fn fmt_vec(v: &[f64]) -> String {
    let cells: Vec<String> = v.iter().map(|x| fmt_num(*x)).collect();
    format!("[{}]", cells.join(", "))
}

fn mark(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn run_table(r: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("ququats: {}\n", r.n));
    if !r.steps.is_empty() {
        out.push_str("steps:\n");
        let width = r
            .steps
            .iter()
            .map(|s| s.description.len())
            .max()
            .unwrap_or(0);
        for s in &r.steps {
            out.push_str(&format!(
                "  [{}] {:<width$}  TP {:<3} unital {:<3} CP {:<3} orthogonal {}\n",
                s.index,
                s.description,
                mark(s.trace_preserving),
                mark(s.unital),
                mark(s.completely_positive),
                mark(s.orthogonal),
            ));
        }
    }
    for m in &r.measurements {
        out.push_str(&format!(
            "measurement at step {} on {:?}: p = {}",
            m.step,
            m.targets,
            fmt_vec(&m.probabilities)
        ));
        if let Some(b) = m.branch {
            out.push_str(&format!(" (kept branch {b})"));
        }
        out.push('\n');
    }
    out.push_str(&format!("final state: {}\n", fmt_vec(&r.final_state)));
    if let Some(v) = &r.verify {
        out.push_str(&format!(
            "verify: max residual {} (tolerance {}), {} step(s) replayed, {} skipped\n",
            fmt_num(v.max_residual),
            fmt_num(v.tolerance),
            v.steps_verified,
            v.steps_skipped,
        ));
    }
    out
}

pub fn analysis_table(r: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("ququats: {}\n", r.n));
    out.push_str(&format!("trace preserving:       {}\n", mark(r.trace_preserving)));
    out.push_str(&format!("unital:                 {}\n", mark(r.unital)));
    out.push_str(&format!("completely positive:    {}\n", mark(r.completely_positive)));
    out.push_str(&format!("orthogonal:             {}\n", mark(r.orthogonal)));
    out.push_str(&format!(
        "trace-decreasing bound: {}\n",
        mark(r.within_trace_decreasing_bound)
    ));
    out.push_str(&format!(
        "min Choi eigenvalue:    {}\n",
        fmt_num(r.min_choi_eigenvalue)
    ));
    out.push_str(&format!("translation:            {}\n", fmt_vec(&r.translation)));
    if let Some(sv) = &r.singular_values {
        out.push_str(&format!("singular values:        {}\n", fmt_vec(sv)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ququat::gatelib::inversion;

    #[test]
    fn analysis_flags_match_the_map_class() {
        let r = analyze_gate(&GateMatrix::identity(1));
        assert!(r.trace_preserving && r.unital && r.completely_positive && r.orthogonal);
        assert_eq!(r.singular_values, Some(vec![1.0, 1.0, 1.0]));
        assert_eq!(r.translation, vec![0.0, 0.0, 0.0]);
        assert!(r.min_choi_eigenvalue > -1e-12);

        let r = analyze_gate(&inversion());
        assert!(r.trace_preserving && r.unital && r.orthogonal);
        assert!(!r.completely_positive);
        assert!(r.min_choi_eigenvalue < -0.1);
        assert_eq!(r.singular_values, Some(vec![1.0, 1.0, 1.0]));
    }

    #[test]
    fn numbers_render_compactly() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(-1.0), "-1");
        assert_eq!(fmt_num(2.2e-16), "2.200e-16");
        assert_eq!(fmt_vec(&[1.0, 0.0, -0.25]), "[1, 0, -0.25]");
    }
}
