//! Small dense linear-algebra helpers shared across modules.

use crate::{C64, CMat, CVec, RMat};

/// Largest entry magnitude of a complex matrix (entrywise infinity norm).
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry magnitude of a real matrix.
pub fn max_abs_real(m: &RMat) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Largest magnitude of `a - b` over all entries.
pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

/// Largest magnitude of `a - b` over all entries, real case.
pub fn max_diff_real(a: &RMat, b: &RMat) -> f64 {
    max_abs_real(&(a - b))
}

/// Deviation of `m` from Hermitian symmetry, as the largest entry of
/// `m - m^dagger`.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    max_diff(m, &m.adjoint())
}

/// Largest imaginary part over all entries.
pub fn max_imag(m: &CMat) -> f64 {
    m.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

/// Column-major vectorisation: column k of `m` occupies entries
/// `k * rows .. (k + 1) * rows` of the result.
pub fn vec_col(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

/// Inverse of [`vec_col`] for a square matrix of side `dim`.
pub fn unvec_col(v: &CVec, dim: usize) -> CMat {
    CMat::from_column_slice(dim, dim, v.as_slice())
}

/// Real part of a complex matrix, rejecting any entry whose imaginary part
/// exceeds `tol`.
pub fn real_part(m: &CMat, tol: f64) -> crate::Result<RMat> {
    let residue = max_imag(m);
    if residue > tol {
        return Err(crate::Error::ImaginaryResidue(residue));
    }
    Ok(m.map(|z| z.re))
}

/// Promote a real matrix to a complex one.
pub fn complexify(m: &RMat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

/// Matrix exponential.
pub fn expm(m: &CMat) -> CMat {
    m.exp()
}

/// Checks that the given operators are mutually orthogonal projectors of
/// side `side`: Hermitian, idempotent, pairwise annihilating.
pub fn check_projectors(projectors: &[CMat], side: usize) -> crate::Result<()> {
    use crate::Error;
    if projectors.is_empty() {
        return Err(Error::NotProjective("empty projector list".into()));
    }
    for (i, p) in projectors.iter().enumerate() {
        if p.nrows() != side || p.ncols() != side {
            return Err(Error::ShapeMismatch(format!(
                "projector {i} is {}x{}, expected {side}x{side}",
                p.nrows(),
                p.ncols()
            )));
        }
        if hermiticity_defect(p) > crate::STRUCT_TOL {
            return Err(Error::NotProjective(format!("operator {i} is not Hermitian")));
        }
        if max_diff(&(p * p), p) > crate::STRUCT_TOL {
            return Err(Error::NotProjective(format!("operator {i} is not idempotent")));
        }
        for (j, q) in projectors.iter().enumerate().skip(i + 1) {
            if max_abs(&(p * q)) > crate::STRUCT_TOL {
                return Err(Error::NotProjective(format!(
                    "operators {i} and {j} are not orthogonal"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hermitian_eigendecomposition_on_complex_matrices() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let eig = nalgebra::SymmetricEigen::new(m.clone());
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        // reconstruction
        let recon = &eig.eigenvectors
            * CMat::from_diagonal(&eig.eigenvalues.map(|x| c(x, 0.0)))
            * eig.eigenvectors.adjoint();
        assert!(max_diff(&m, &recon) < 1e-12);
    }

    #[test]
    fn svd_returns_descending_singular_values() {
        let m = RMat::from_row_slice(3, 3, &[0.0, 2.0, 0.0, 0.0, 0.0, 0.5, 1.0, 0.0, 0.0]);
        let svd = nalgebra::SVD::new(m.clone(), true, true);
        let s = &svd.singular_values;
        assert!(s[0] >= s[1] && s[1] >= s[2], "unsorted: {s}");
        assert!((s[0] - 2.0).abs() < 1e-12 && (s[2] - 0.5).abs() < 1e-12);
        let recon = svd.u.as_ref().unwrap()
            * RMat::from_diagonal(s)
            * svd.v_t.as_ref().unwrap();
        assert!(max_diff_real(&m, &recon) < 1e-12);
    }

    #[test]
    fn vectorisation_round_trip_is_column_major() {
        let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        let v = vec_col(&m);
        // column 0 is (1, 3)
        assert_eq!(v[0], c(1.0, 0.0));
        assert_eq!(v[1], c(3.0, 0.0));
        assert_eq!(v[2], c(2.0, 0.0));
        assert_eq!(unvec_col(&v, 2), m);
    }

    #[test]
    fn matrix_exponential_matches_closed_form() {
        // exp(i t X) = cos(t) I + i sin(t) X for the Pauli X matrix.
        let t = 0.7;
        let x = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, t), c(0.0, t), c(0.0, 0.0)]);
        let e = expm(&x);
        let expected = CMat::from_row_slice(
            2,
            2,
            &[
                c(t.cos(), 0.0),
                c(0.0, t.sin()),
                c(0.0, t.sin()),
                c(t.cos(), 0.0),
            ],
        );
        assert!(max_diff(&e, &expected) < 1e-12);
    }

    #[test]
    fn kronecker_product_uses_left_factor_as_high_digit() {
        let a = RMat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let b = RMat::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 4.0]);
        let k = a.kronecker(&b);
        assert_eq!(k[(0, 0)], 3.0);
        assert_eq!(k[(1, 1)], 4.0);
        assert_eq!(k[(2, 2)], 6.0);
        assert_eq!(k[(3, 3)], 8.0);
    }
}
