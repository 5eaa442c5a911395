//! Seeded random generators for states, operators, unitaries and channels.
//!
//! Tests and the self-test suite sample from these; every consumer passes
//! an explicit seed so runs are reproducible. Construction schemes:
//! density matrices from the Ginibre ensemble (`G G^dagger` normalised),
//! unitaries from phase-fixed QR of a Ginibre matrix, channels from
//! Ginibre Kraus lists renormalised to trace preservation.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::liouville::DensityMatrix;
use crate::superop::KrausSet;
use crate::{C64, CMat};

/// A deterministic RNG for the given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (Ginibre) matrix: independent entries with
/// standard normal real and imaginary parts.
pub fn random_matrix<R: Rng>(dim: usize, rng: &mut R) -> CMat {
    CMat::from_fn(dim, dim, |_, _| C64::new(normal(rng), normal(rng)))
}

/// Random density matrix on `n` ququats: `G G^dagger / Tr(G G^dagger)`.
pub fn random_density<R: Rng>(n: usize, rng: &mut R) -> DensityMatrix {
    let g = random_matrix(1 << n, rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m / tr).expect("Ginibre construction yields a valid state")
}

/// Random unitary from the QR decomposition of a Ginibre matrix, with the
/// R-diagonal phases absorbed so the distribution is unbiased.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> CMat {
    let g = random_matrix(dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Random trace-preserving Kraus set with `m` operators on `n` ququats:
/// Ginibre matrices `B_j` renormalised by `S^{-1/2}` where
/// `S = sum_j B_j^dagger B_j`.
pub fn random_kraus<R: Rng>(n: usize, m: usize, rng: &mut R) -> KrausSet {
    let dim = 1 << n;
    let bs: Vec<CMat> = (0..m).map(|_| random_matrix(dim, rng)).collect();
    let mut s = CMat::zeros(dim, dim);
    for b in &bs {
        s += b.adjoint() * b;
    }
    let eig = nalgebra::SymmetricEigen::new(s);
    let inv_sqrt = &eig.eigenvectors
        * CMat::from_diagonal(&eig.eigenvalues.map(|x| C64::new(1.0 / x.sqrt(), 0.0)))
        * eig.eigenvectors.adjoint();
    let ops = bs.into_iter().map(|b| b * &inv_sqrt).collect();
    KrausSet::new(n, ops).expect("renormalised Ginibre Kraus set is well formed")
}

/// A random complete set of orthogonal projectors on `n` ququats,
/// partitioning the columns of a random unitary into `parts` groups.
pub fn random_projectors<R: Rng>(n: usize, parts: usize, rng: &mut R) -> Vec<CMat> {
    let dim = 1 << n;
    assert!(parts >= 1 && parts <= dim, "parts must lie in 1..=2^n");
    let u = random_unitary(dim, rng);
    let mut projectors = vec![CMat::zeros(dim, dim); parts];
    for col in 0..dim {
        let v = u.column(col);
        projectors[col % parts] += &v * v.adjoint();
    }
    projectors
}

/// Standard normal sample via Box-Muller.
fn normal<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (-2.0 * u.ln()).sqrt() * v.cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_diff;

    #[test]
    fn random_densities_are_valid_states() {
        let mut rng = rng(1);
        for n in 1..=3 {
            let rho = random_density(n, &mut rng);
            assert!(rho.validity().is_physical());
        }
    }

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = rng(2);
        for dim in [2usize, 4, 8] {
            let u = random_unitary(dim, &mut rng);
            let id = CMat::identity(dim, dim);
            assert!(max_diff(&(&u * u.adjoint()), &id) < 1e-12);
        }
    }

    #[test]
    fn random_kraus_sets_preserve_trace() {
        let mut rng = rng(3);
        for n in 1..=3 {
            let k = random_kraus(n, 3, &mut rng);
            assert!(k.is_trace_preserving());
        }
    }

    #[test]
    fn random_projectors_resolve_identity() {
        let mut rng = rng(4);
        let ps = random_projectors(2, 3, &mut rng);
        let mut sum = CMat::zeros(4, 4);
        for p in &ps {
            // idempotent and Hermitian
            assert!(max_diff(&(p * p), p) < 1e-12);
            assert!(crate::linalg::hermiticity_defect(p) < 1e-12);
            sum += p;
        }
        assert!(max_diff(&sum, &CMat::identity(4, 4)) < 1e-12);
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_density(2, &mut rng(77));
        let b = random_density(2, &mut rng(77));
        assert_eq!(a.matrix(), b.matrix());
    }
}
