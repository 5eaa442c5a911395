//! Independent dense reference implementation.
//!
//! Everything here works directly on density matrices with plain matrix
//! arithmetic: operator sums for evolution, projector sandwiches for
//! measurement, a Hermitian eigensolver for Choi spectra. None of it goes
//! through the Pauli basis or the transfer-matrix pipeline, so agreement
//! between the two paths is evidence, not tautology.

use crate::liouville::DensityMatrix;
use crate::superop::{ChoiMatrix, KrausSet};
use crate::{C64, CMat, Error, Result};

/// Direct operator-sum evolution: `rho' = sum_j A_j rho A_j^dagger`.
///
/// The input set must be trace preserving for the output to be a state;
/// use [`measure_dense`] with a single projector for trace-decreasing
/// branches.
pub fn evolve_dense(k: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if k.n() != rho.n() {
        return Err(Error::ShapeMismatch(format!(
            "channel on {} ququats applied to state on {}",
            k.n(),
            rho.n()
        )));
    }
    let side = 1usize << k.n();
    let mut out = CMat::zeros(side, side);
    for a in k.ops() {
        out += a * rho.matrix() * a.adjoint();
    }
    DensityMatrix::new_signed(out)
}

/// Projective measurement by direct sandwiching.
///
/// Returns the branch probabilities `p(k) = Tr(P_k rho P_k)` and the
/// ensemble post-measurement state `sum_k P_k rho P_k` renormalised by the
/// total probability.
pub fn measure_dense(
    projectors: &[CMat],
    rho: &DensityMatrix,
) -> Result<(Vec<f64>, DensityMatrix)> {
    validate_projectors(projectors, rho.n())?;
    let side = 1usize << rho.n();
    let mut probabilities = Vec::with_capacity(projectors.len());
    let mut ensemble = CMat::zeros(side, side);
    for p in projectors {
        let branch = p * rho.matrix() * p;
        let tr = branch.trace();
        probabilities.push(tr.re);
        ensemble += branch;
    }
    let total: f64 = probabilities.iter().sum();
    if total <= 1e-12 {
        return Err(Error::VanishingTrace(total));
    }
    let post = DensityMatrix::new_signed(ensemble / C64::new(total, 0.0))?;
    Ok((probabilities, post))
}

/// Sorted (ascending) real spectrum of a Choi matrix.
pub fn choi_eigenvalues(c: &ChoiMatrix) -> Vec<f64> {
    let eig = nalgebra::SymmetricEigen::new(c.matrix().clone());
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Checks that the operators are orthogonal projectors of the right shape.
fn validate_projectors(projectors: &[CMat], n: usize) -> Result<()> {
    crate::linalg::check_projectors(projectors, 1usize << n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::pauli_2x2;
    use crate::random::{random_density, random_kraus, random_projectors, rng};

    fn ground() -> DensityMatrix {
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = C64::new(1.0, 0.0);
        DensityMatrix::new(m).unwrap()
    }

    fn computational_projectors() -> Vec<CMat> {
        let mut p0 = CMat::zeros(2, 2);
        p0[(0, 0)] = C64::new(1.0, 0.0);
        let mut p1 = CMat::zeros(2, 2);
        p1[(1, 1)] = C64::new(1.0, 0.0);
        vec![p0, p1]
    }

    #[test]
    fn identity_channel_leaves_states_alone() {
        let k = KrausSet::new(1, vec![CMat::identity(2, 2)]).unwrap();
        let rho = random_density(1, &mut rng(41));
        let out = evolve_dense(&k, &rho).unwrap();
        assert!(crate::linalg::max_diff(out.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn bit_flip_exchanges_the_computational_projectors() {
        let k = KrausSet::new(1, vec![pauli_2x2(1)]).unwrap();
        let out = evolve_dense(&k, &ground()).unwrap();
        let mut excited = CMat::zeros(2, 2);
        excited[(1, 1)] = C64::new(1.0, 0.0);
        assert!(crate::linalg::max_diff(out.matrix(), &excited) < 1e-15);
    }

    #[test]
    fn evolution_preserves_hermiticity_and_positivity() {
        let mut rng = rng(42);
        for n in 1..=3 {
            let k = random_kraus(n, 3, &mut rng);
            let rho = random_density(n, &mut rng);
            let out = evolve_dense(&k, &rho).unwrap();
            assert!(crate::linalg::hermiticity_defect(out.matrix()) < 1e-12);
            assert!(out.min_eigenvalue() >= -1e-9);
        }
    }

    #[test]
    fn measurement_of_the_maximally_mixed_state_is_uniform() {
        let rho = DensityMatrix::new(CMat::identity(2, 2) / C64::new(2.0, 0.0)).unwrap();
        let (p, post) = measure_dense(&computational_projectors(), &rho).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        // dephasing leaves the diagonal state unchanged
        assert!(crate::linalg::max_diff(post.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn measurement_of_an_eigenstate_is_deterministic() {
        let (p, post) = measure_dense(&computational_projectors(), &ground()).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1].abs() < 1e-15);
        assert!(crate::linalg::max_diff(post.matrix(), ground().matrix()) < 1e-15);
    }

    #[test]
    fn single_projector_measurement_yields_the_conditional_state() {
        let rho = DensityMatrix::new(CMat::identity(2, 2) / C64::new(2.0, 0.0)).unwrap();
        let p0 = computational_projectors().remove(0);
        let (p, post) = measure_dense(std::slice::from_ref(&p0), &rho).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15);
        assert!(crate::linalg::max_diff(post.matrix(), ground().matrix()) < 1e-15);
    }

    #[test]
    fn degenerate_projectors_are_rejected() {
        let p0 = computational_projectors().remove(0);
        let rho = ground();
        // duplicated projector: not orthogonal
        assert!(matches!(
            measure_dense(&[p0.clone(), p0.clone()], &rho),
            Err(Error::NotProjective(_))
        ));
        // not idempotent
        assert!(matches!(
            measure_dense(&[p0 * C64::new(2.0, 0.0)], &rho),
            Err(Error::NotProjective(_))
        ));
    }

    #[test]
    fn zero_probability_measurements_are_reported() {
        let mut p1 = CMat::zeros(2, 2);
        p1[(1, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            measure_dense(&[p1], &ground()),
            Err(Error::VanishingTrace(_))
        ));
    }

    #[test]
    fn random_projective_measurements_behave_like_probabilities() {
        let mut rng = rng(43);
        for _ in 0..20 {
            let rho = random_density(2, &mut rng);
            let projs = random_projectors(2, 3, &mut rng);
            let (p, post) = measure_dense(&projs, &rho).unwrap();
            let total: f64 = p.iter().sum();
            assert!((total - 1.0).abs() < 1e-10);
            assert!(p.iter().all(|&x| x >= -1e-12));
            assert!(post.min_eigenvalue() >= -1e-9);
        }
    }

    #[test]
    fn choi_spectra_come_out_sorted_with_small_residuals() {
        let k = KrausSet::new(1, vec![CMat::identity(2, 2)]).unwrap();
        let choi = crate::superop::choi_from_kraus(&k);
        let vals = choi_eigenvalues(&choi);
        assert_eq!(vals.len(), 4);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        assert!((vals[3] - 2.0).abs() < 1e-12);
        assert!(vals[..3].iter().all(|v| v.abs() < 1e-12));

        // eigenpair residual check on a random CP channel
        let mut rng = rng(44);
        let k = random_kraus(1, 3, &mut rng);
        let choi = crate::superop::choi_from_kraus(&k);
        let eig = nalgebra::SymmetricEigen::new(choi.matrix().clone());
        for j in 0..4 {
            let v = eig.eigenvectors.column(j);
            let residual = choi.matrix() * v - v * C64::new(eig.eigenvalues[j], 0.0);
            assert!(residual.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-9);
        }
        assert!(choi_eigenvalues(&choi).iter().all(|&x| x >= -1e-9));
    }
}
