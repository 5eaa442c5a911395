//! Named gate constructors: Pauli conjugations, Euler rotations,
//! reflections, inversion, measurement superoperators, and coefficient
//! projections.
//!
//! All single-ququat gates here are 4x4 transfer matrices. The unitary
//! family (Pauli gates, rotations, Euler gates) produces orthogonal
//! matrices; reflections and inversion are orthogonal but not completely
//! positive; measurement gates are symmetric and trace-decreasing.

use std::f64::consts::TAU;

use crate::liouville::{PauliIndex, PauliVector};
use crate::superop::{
    compose, nonlinear_apply, trace_functional, GateMatrix, NONLINEAR_CUTOFF,
};
use crate::{C64, CMat, Error, RMat, Result};

/// Euler angles (z-y-z convention) naming a single-ququat rotation gate.
///
/// The canonical parameter domain is `alpha, beta` in `[0, 2pi)` and
/// `theta` in `[0, pi]`; every rotation gate is reached by some canonical
/// triple. The constructor accepts arbitrary angles and stores them
/// reduced modulo `2pi`, which leaves the named gate unchanged: shifting
/// any argument by `2pi` flips only the global phase of the underlying
/// unitary. Triples with `theta` in `(pi, 2pi)` are retained as given;
/// they alias canonical triples with adjusted `alpha` and `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    alpha: f64,
    theta: f64,
    beta: f64,
}

impl EulerAngles {
    /// Builds an angle triple, reducing each argument modulo `2pi`.
    pub fn new(alpha: f64, theta: f64, beta: f64) -> Self {
        Self {
            alpha: alpha.rem_euclid(TAU),
            theta: theta.rem_euclid(TAU),
            beta: beta.rem_euclid(TAU),
        }
    }

    /// First z-rotation angle, in `[0, 2pi)`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Middle y-rotation angle, in `[0, 2pi)`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Second z-rotation angle, in `[0, 2pi)`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// True when the stored triple lies in the canonical domain,
    /// i.e. `theta <= pi`.
    pub fn is_canonical(&self) -> bool {
        self.theta <= std::f64::consts::PI
    }
}

/// Transfer matrix of conjugation by the Pauli operator `sigma_k`.
///
/// Diagonal with +1 at positions 0 and `k`, -1 at the remaining two.
pub fn pauli_gate(k: usize) -> Result<GateMatrix> {
    if !(1..=3).contains(&k) {
        return Err(Error::OutOfRange(format!("Pauli label {k} not in 1..=3")));
    }
    let mut m = RMat::identity(4, 4) * -1.0;
    m[(0, 0)] = 1.0;
    m[(k, k)] = 1.0;
    GateMatrix::new(1, m)
}

/// Rotation about axis 3 by `alpha`: mixes coefficients 1 and 2.
pub fn rotation1(alpha: f64) -> GateMatrix {
    let (s, c) = alpha.sin_cos();
    let mut m = RMat::identity(4, 4);
    m[(1, 1)] = c;
    m[(1, 2)] = -s;
    m[(2, 1)] = s;
    m[(2, 2)] = c;
    GateMatrix::new(1, m).expect("4x4 rotation is well formed")
}

/// Rotation about axis 2 by `theta`: mixes coefficients 1 and 3.
pub fn rotation2(theta: f64) -> GateMatrix {
    let (s, c) = theta.sin_cos();
    let mut m = RMat::identity(4, 4);
    m[(1, 1)] = c;
    m[(1, 3)] = s;
    m[(3, 1)] = -s;
    m[(3, 3)] = c;
    GateMatrix::new(1, m).expect("4x4 rotation is well formed")
}

/// General single-ququat rotation `rotation1(alpha) * rotation2(theta) *
/// rotation1(beta)`.
pub fn euler_gate(a: EulerAngles) -> GateMatrix {
    let inner = compose(&rotation2(a.theta), &rotation1(a.beta)).expect("matching sides");
    compose(&rotation1(a.alpha), &inner).expect("matching sides")
}

/// The 2x2 unitary `U_1(alpha) U_2(theta) U_1(beta)` whose conjugation
/// action `euler_gate` represents.
pub fn euler_unitary(a: EulerAngles) -> CMat {
    u1(a.alpha) * u2(a.theta) * u1(a.beta)
}

/// Angles of the inverse rotation: `euler_gate(euler_inverse(a))` is the
/// matrix inverse of `euler_gate(a)`.
///
/// The inverse triple is `(pi - beta, theta, pi - alpha)`: conjugating
/// `U_1(-beta) U_2(theta) U_1(-alpha)` by `U_1(pi)` flips the sign of the
/// middle angle at the cost of a global phase, which the transfer matrix
/// ignores.
pub fn euler_inverse(a: EulerAngles) -> EulerAngles {
    EulerAngles::new(std::f64::consts::PI - a.beta, a.theta, std::f64::consts::PI - a.alpha)
}

fn u1(alpha: f64) -> CMat {
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = C64::from_polar(1.0, -alpha / 2.0);
    m[(1, 1)] = C64::from_polar(1.0, alpha / 2.0);
    m
}

fn u2(theta: f64) -> CMat {
    let (s, c) = (theta / 2.0).sin_cos();
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = C64::new(c, 0.0);
    m[(0, 1)] = C64::new(-s, 0.0);
    m[(1, 0)] = C64::new(s, 0.0);
    m[(1, 1)] = C64::new(c, 0.0);
    m
}

/// Reflection flipping the sign of coefficient `k` only.
pub fn reflection(k: usize) -> Result<GateMatrix> {
    if !(1..=3).contains(&k) {
        return Err(Error::OutOfRange(format!("reflection axis {k} not in 1..=3")));
    }
    let mut m = RMat::identity(4, 4);
    m[(k, k)] = -1.0;
    GateMatrix::new(1, m)
}

/// Inversion: flips the sign of every non-identity coefficient.
///
/// Orthogonal and trace-preserving but not completely positive, so it is
/// a decomposition factor rather than a physical channel.
pub fn inversion() -> GateMatrix {
    let mut m = RMat::identity(4, 4) * -1.0;
    m[(0, 0)] = 1.0;
    GateMatrix::new(1, m).expect("4x4 inversion is well formed")
}

/// Trace-decreasing gate of the single-ququat computational projector
/// `|k><k|`, `k` in `{0, 1}`.
pub fn measurement_gate(k: usize) -> Result<GateMatrix> {
    if k > 1 {
        return Err(Error::OutOfRange(format!("computational outcome {k} not in 0..=1")));
    }
    let sign = if k == 0 { 1.0 } else { -1.0 };
    let mut m = RMat::zeros(4, 4);
    m[(0, 0)] = 0.5;
    m[(3, 3)] = 0.5;
    m[(0, 3)] = 0.5 * sign;
    m[(3, 0)] = 0.5 * sign;
    GateMatrix::new(1, m)
}

/// Trace-decreasing gate of an arbitrary orthogonal projector on `n`
/// ququats: the transfer matrix of `rho -> P rho P`.
pub fn projector_gate(p: &CMat) -> Result<GateMatrix> {
    let side = p.nrows();
    if side == 0 || !side.is_power_of_two() || p.ncols() != side {
        return Err(Error::ShapeMismatch(format!(
            "projector must be square with power-of-two side, got {}x{}",
            p.nrows(),
            p.ncols()
        )));
    }
    crate::linalg::check_projectors(std::slice::from_ref(p), side)?;
    let n = side.trailing_zeros() as usize;
    crate::superop::ptm_from_ops(n, std::slice::from_ref(p))
}

/// Result of a projective measurement on a Pauli coefficient vector.
#[derive(Debug, Clone)]
pub struct Measurement {
    /// Outcome probabilities, one per projector, in input order.
    pub probabilities: Vec<f64>,
    /// Ensemble state after the measurement, renormalised.
    pub post_state: PauliVector,
    /// Conditional state for each outcome; `None` where the outcome
    /// probability is below the renormalisation cutoff.
    pub branch_states: Vec<Option<PauliVector>>,
}

/// Measures `p` with a list of mutually orthogonal projectors.
///
/// Probabilities come from the trace functional of each projector gate;
/// the post-measurement state applies the summed gate and renormalises.
/// Probabilities sum to 1 for complete projector sets and to less than 1
/// for incomplete ones. Fails when every outcome probability is below the
/// cutoff.
pub fn von_neumann_measure(projectors: &[CMat], p: &PauliVector) -> Result<Measurement> {
    if !p.is_normalised() {
        return Err(Error::NotNormalised(p.coeffs()[0]));
    }
    let side = 1usize << p.n();
    crate::linalg::check_projectors(projectors, side)?;
    let gates: Vec<GateMatrix> = projectors
        .iter()
        .map(projector_gate)
        .collect::<Result<_>>()?;
    let mut probabilities = Vec::with_capacity(gates.len());
    let mut summed = RMat::zeros(side * side, side * side);
    for g in &gates {
        probabilities.push(trace_functional(g, p)?);
        summed += g.matrix();
    }
    if probabilities.iter().all(|&q| q.abs() <= NONLINEAR_CUTOFF) {
        return Err(Error::VanishingTrace(probabilities.iter().sum()));
    }
    let summed = GateMatrix::new(p.n(), summed)?;
    let post_state = nonlinear_apply(&summed, p)?;
    let branch_states = gates
        .iter()
        .zip(&probabilities)
        .map(|(g, &q)| {
            if q.abs() <= NONLINEAR_CUTOFF {
                None
            } else {
                Some(nonlinear_apply(g, p).expect("probability above cutoff"))
            }
        })
        .collect();
    Ok(Measurement { probabilities, post_state, branch_states })
}

/// Coefficient projection `|mu)(mu|`: keeps the `mu`-th Pauli coefficient
/// and zeroes the rest. A Liouville-space projector, not a channel.
pub fn projection_superoperator(mu: &PauliIndex) -> GateMatrix {
    let dim = 4usize.pow(mu.n() as u32);
    let mut m = RMat::zeros(dim, dim);
    m[(mu.value(), mu.value())] = 1.0;
    GateMatrix::new(mu.n(), m).expect("square coefficient projector")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm, max_diff, max_diff_real};
    use crate::liouville::{comp_state, pauli_2x2};
    use crate::random::{random_projectors, rng};
    use crate::superop::{
        apply, is_completely_positive, is_orthogonal, is_trace_preserving, is_unital,
        ptm_from_unitary,
        satisfies_trace_decreasing_bound,
    };
    use rand::Rng;
    use std::f64::consts::PI;

    fn diag4(d: [f64; 4]) -> RMat {
        RMat::from_diagonal(&crate::RVec::from_row_slice(&d))
    }

    fn state1(c: [f64; 4]) -> PauliVector {
        PauliVector::state(1, crate::RVec::from_row_slice(&c)).unwrap()
    }

    #[test]
    fn pauli_gates_match_printed_diagonals() {
        assert_eq!(pauli_gate(1).unwrap().matrix(), &diag4([1.0, 1.0, -1.0, -1.0]));
        assert_eq!(pauli_gate(2).unwrap().matrix(), &diag4([1.0, -1.0, 1.0, -1.0]));
        assert_eq!(pauli_gate(3).unwrap().matrix(), &diag4([1.0, -1.0, -1.0, 1.0]));
        assert!(pauli_gate(0).is_err());
        assert!(pauli_gate(4).is_err());
    }

    #[test]
    fn pauli_gates_match_unitary_construction() {
        for k in 1..=3u8 {
            let direct = pauli_gate(k as usize).unwrap();
            let built = ptm_from_unitary(&pauli_2x2(k)).unwrap();
            assert!(max_diff_real(direct.matrix(), built.matrix()) < 1e-12);
        }
    }

    #[test]
    fn rotation_special_values() {
        assert!(max_diff_real(rotation1(0.0).matrix(), &RMat::identity(4, 4)) < 1e-15);
        assert!(
            max_diff_real(rotation1(PI).matrix(), pauli_gate(3).unwrap().matrix()) < 1e-15
        );
    }

    #[test]
    fn rotations_match_their_unitaries() {
        for theta in [0.1, 1.0, 2.5] {
            let u = expm(&(pauli_2x2(2) * C64::new(0.0, -theta / 2.0)));
            assert!(max_diff(&u, &u2(theta)) < 1e-12);
            let built = ptm_from_unitary(&u).unwrap();
            assert!(max_diff_real(rotation2(theta).matrix(), built.matrix()) < 1e-12);
        }
        let u = expm(&(pauli_2x2(3) * C64::new(0.0, -0.7 / 2.0)));
        assert!(max_diff(&u, &u1(0.7)) < 1e-12);
        let built = ptm_from_unitary(&u).unwrap();
        assert!(max_diff_real(rotation1(0.7).matrix(), built.matrix()) < 1e-12);
    }

    #[test]
    fn rotations_are_orthogonal_unital_trace_preserving() {
        let mut r = rng(31);
        for _ in 0..20 {
            let angle = r.gen_range(-10.0..10.0);
            for g in [rotation1(angle), rotation2(angle)] {
                assert!(is_orthogonal(&g));
                assert!(is_unital(&g));
                assert!(is_trace_preserving(&g));
            }
        }
    }

    #[test]
    fn rotations_have_period_two_pi() {
        for angle in [0.3, 1.9, 4.4] {
            assert!(max_diff_real(rotation1(angle).matrix(), rotation1(angle + TAU).matrix()) < 1e-14);
            assert!(max_diff_real(rotation2(angle).matrix(), rotation2(angle + TAU).matrix()) < 1e-14);
        }
    }

    #[test]
    fn euler_identity_at_zero() {
        let g = euler_gate(EulerAngles::new(0.0, 0.0, 0.0));
        assert!(max_diff_real(g.matrix(), &RMat::identity(4, 4)) < 1e-15);
    }

    #[test]
    fn euler_gate_matches_unitary_construction() {
        let mut r = rng(47);
        for _ in 0..100 {
            let a = EulerAngles::new(
                r.gen_range(0.0..TAU),
                r.gen_range(0.0..TAU),
                r.gen_range(0.0..TAU),
            );
            let direct = euler_gate(a);
            let built = ptm_from_unitary(&euler_unitary(a)).unwrap();
            assert!(max_diff_real(direct.matrix(), built.matrix()) < 1e-12);
            assert!(is_orthogonal(&direct));
        }
    }

    #[test]
    fn euler_inverse_composes_to_identity() {
        let mut r = rng(53);
        for _ in 0..100 {
            let a = EulerAngles::new(
                r.gen_range(-TAU..TAU),
                r.gen_range(-TAU..TAU),
                r.gen_range(-TAU..TAU),
            );
            let g = euler_gate(a);
            let ginv = euler_gate(euler_inverse(a));
            let prod = compose(&g, &ginv).unwrap();
            assert!(max_diff_real(prod.matrix(), &RMat::identity(4, 4)) < 1e-12);
            let prod = compose(&ginv, &g).unwrap();
            assert!(max_diff_real(prod.matrix(), &RMat::identity(4, 4)) < 1e-12);
        }
    }

    #[test]
    fn euler_gate_is_periodic_in_each_angle() {
        let a = EulerAngles::new(0.4, 1.1, 2.7);
        for shifted in [
            EulerAngles::new(0.4 + TAU, 1.1, 2.7),
            EulerAngles::new(0.4, 1.1 + TAU, 2.7),
            EulerAngles::new(0.4, 1.1, 2.7 + TAU),
        ] {
            assert!(max_diff_real(euler_gate(a).matrix(), euler_gate(shifted).matrix()) < 1e-12);
        }
    }

    #[test]
    fn euler_angles_reduce_and_classify() {
        let a = EulerAngles::new(-0.5, 7.0, TAU + 0.25);
        assert!((a.alpha() - (TAU - 0.5)).abs() < 1e-15);
        assert!((a.theta() - (7.0 - TAU)).abs() < 1e-15);
        assert!((a.beta() - 0.25).abs() < 1e-15);
        assert!(a.is_canonical());
        assert!(!EulerAngles::new(0.0, 4.0, 0.0).is_canonical());
    }

    #[test]
    fn reflections_match_printed_diagonals() {
        assert_eq!(reflection(1).unwrap().matrix(), &diag4([1.0, -1.0, 1.0, 1.0]));
        assert_eq!(reflection(2).unwrap().matrix(), &diag4([1.0, 1.0, -1.0, 1.0]));
        assert_eq!(reflection(3).unwrap().matrix(), &diag4([1.0, 1.0, 1.0, -1.0]));
        assert!(reflection(0).is_err());
        assert_eq!(inversion().matrix(), &diag4([1.0, -1.0, -1.0, -1.0]));
    }

    #[test]
    fn reflections_and_inversion_are_orthogonal_but_not_cp() {
        for g in [
            reflection(1).unwrap(),
            reflection(2).unwrap(),
            reflection(3).unwrap(),
            inversion(),
        ] {
            assert!(is_orthogonal(&g));
            assert!(is_trace_preserving(&g));
            assert!(!is_completely_positive(&g));
        }
    }

    #[test]
    fn rotation_composed_with_inversion_gives_reflection() {
        let prod = compose(&rotation1(PI), &inversion()).unwrap();
        assert!(max_diff_real(prod.matrix(), reflection(3).unwrap().matrix()) < 1e-15);
    }

    #[test]
    fn measurement_gates_match_printed_matrices() {
        let e0 = measurement_gate(0).unwrap();
        let e1 = measurement_gate(1).unwrap();
        let mut want0 = RMat::zeros(4, 4);
        want0[(0, 0)] = 0.5;
        want0[(3, 3)] = 0.5;
        want0[(0, 3)] = 0.5;
        want0[(3, 0)] = 0.5;
        assert_eq!(e0.matrix(), &want0);
        let mut want1 = want0.clone();
        want1[(0, 3)] = -0.5;
        want1[(3, 0)] = -0.5;
        assert_eq!(e1.matrix(), &want1);
        assert!(measurement_gate(2).is_err());

        let sum = e0.matrix() + e1.matrix();
        assert_eq!(sum, diag4([1.0, 0.0, 0.0, 1.0]));
        for e in [&e0, &e1] {
            assert!(max_diff_real(e.matrix(), &e.matrix().transpose()) < 1e-15);
            assert!(satisfies_trace_decreasing_bound(e));
        }
    }

    #[test]
    fn measurement_gates_come_from_computational_projectors() {
        for k in 0..2 {
            let mut p = CMat::zeros(2, 2);
            p[(k, k)] = C64::new(1.0, 0.0);
            let built = projector_gate(&p).unwrap();
            assert!(
                max_diff_real(built.matrix(), measurement_gate(k).unwrap().matrix()) < 1e-15
            );
        }
    }

    #[test]
    fn projector_gate_rejects_non_projectors() {
        let m = &pauli_2x2(1) * C64::new(0.5, 0.0);
        assert!(matches!(projector_gate(&m), Err(Error::NotProjective(_))));
        let rect = CMat::zeros(2, 3);
        assert!(matches!(projector_gate(&rect), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn projector_gate_is_symmetric_for_random_projectors() {
        let mut r = rng(59);
        for n in 1..=2 {
            let projs = random_projectors(n, 2, &mut r);
            for p in &projs {
                let g = projector_gate(p).unwrap();
                assert!(max_diff_real(g.matrix(), &g.matrix().transpose()) < 1e-10);
                assert!(satisfies_trace_decreasing_bound(&g));
            }
        }
    }

    fn computational_projectors() -> Vec<CMat> {
        (0..2)
            .map(|k| {
                let mut p = CMat::zeros(2, 2);
                p[(k, k)] = C64::new(1.0, 0.0);
                p
            })
            .collect()
    }

    #[test]
    fn measuring_the_maximally_mixed_state_is_unbiased() {
        let p = state1([1.0, 0.0, 0.0, 0.0]);
        let m = von_neumann_measure(&computational_projectors(), &p).unwrap();
        assert!((m.probabilities[0] - 0.5).abs() < 1e-12);
        assert!((m.probabilities[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn measuring_an_eigenstate_is_deterministic() {
        let p = comp_state(&PauliIndex::new(1, 3).unwrap());
        let m = von_neumann_measure(&computational_projectors(), &p).unwrap();
        assert!((m.probabilities[0] - 1.0).abs() < 1e-12);
        assert!(m.probabilities[1].abs() < 1e-12);
        assert!(m.branch_states[1].is_none());
        let back = m.branch_states[0].as_ref().unwrap();
        assert!((back.coeffs()[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measuring_a_coherent_state_dephases_it() {
        let p = state1([1.0, 1.0, 0.0, 0.0]);
        let m = von_neumann_measure(&computational_projectors(), &p).unwrap();
        assert!((m.probabilities[0] - 0.5).abs() < 1e-12);
        assert!((m.probabilities[1] - 0.5).abs() < 1e-12);
        let want = [1.0, 0.0, 0.0, 0.0];
        for (got, want) in m.post_state.coeffs().iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
        let b0 = m.branch_states[0].as_ref().unwrap().coeffs();
        let b1 = m.branch_states[1].as_ref().unwrap().coeffs();
        for (got, want) in b0.iter().zip([1.0, 0.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        for (got, want) in b1.iter().zip([1.0, 0.0, 0.0, -1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn incomplete_projector_sets_leak_probability() {
        let p = state1([1.0, 0.0, 0.0, 0.0]);
        let projs = computational_projectors();
        let m = von_neumann_measure(&projs[..1], &p).unwrap();
        assert_eq!(m.probabilities.len(), 1);
        assert!((m.probabilities[0] - 0.5).abs() < 1e-12);
        for (got, want) in m.post_state.coeffs().iter().zip([1.0, 0.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn measurement_with_no_weight_fails() {
        let p = comp_state(&PauliIndex::new(1, 3).unwrap());
        let projs = computational_projectors();
        let excited = &projs[1..];
        assert!(matches!(
            von_neumann_measure(excited, &p),
            Err(Error::VanishingTrace(_))
        ));
    }

    #[test]
    fn complete_projector_sets_have_unit_total_probability() {
        let mut r = rng(61);
        for n in 1..=2 {
            for parts in [2, 1 << n] {
                let projs = random_projectors(n, parts, &mut r);
                let p = crate::liouville::density_to_pauli(&crate::random::random_density(
                    n, &mut r,
                ))
                .unwrap();
                let m = von_neumann_measure(&projs, &p).unwrap();
                let total: f64 = m.probabilities.iter().sum();
                assert!((total - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn projection_superoperators_select_coefficients() {
        let mu0 = PauliIndex::new(1, 0).unwrap();
        assert_eq!(
            projection_superoperator(&mu0).matrix(),
            &diag4([1.0, 0.0, 0.0, 0.0])
        );
        let mu3 = PauliIndex::new(1, 3).unwrap();
        let p = state1([1.0, 0.0, 0.0, 1.0]);
        let out = apply(&projection_superoperator(&mu3), &p).unwrap();
        assert_eq!(out.coeffs().as_slice(), &[0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn projection_superoperators_are_complete() {
        for n in 1..=2 {
            let dim = 4usize.pow(n as u32);
            let mut sum = RMat::zeros(dim, dim);
            for value in 0..dim {
                let mu = PauliIndex::new(n, value).unwrap();
                sum += projection_superoperator(&mu).matrix();
            }
            assert!(max_diff_real(&sum, &RMat::identity(dim, dim)) < 1e-15);
        }
    }
}
