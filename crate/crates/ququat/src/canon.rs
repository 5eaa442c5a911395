//! Canonical structure of trace-preserving transfer matrices: the affine
//! (translation, linear block) form with its group law, and the singular
//! value decomposition into translation, orthogonal, and diagonal
//! factors.
//!
//! A trace-preserving matrix has first row (1, 0, ..., 0) and therefore
//! the block form [[1, 0], [T, R]]. Composition acts as a semidirect
//! product: (T, R)(T', R') = (T + R T', R R'). Factoring R = U1 D U2 by
//! SVD gives E = E^(T) U1_hat D_hat U2_hat with every factor itself
//! trace-preserving.

use nalgebra::SVD;

use crate::linalg::max_abs_real;
use crate::superop::{compose, GateMatrix};
use crate::{Error, RMat, RVec, Result};

/// Translation vector and linear block of a trace-preserving transfer
/// matrix: the blocks T (length 4^n - 1) and R of [[1, 0], [T, R]].
#[derive(Debug, Clone, PartialEq)]
pub struct AffineForm {
    n: usize,
    translation: RVec,
    linear: RMat,
}

impl AffineForm {
    /// Builds an affine form, checking block dimensions against `n`.
    pub fn new(n: usize, translation: RVec, linear: RMat) -> Result<Self> {
        let dim = 4usize.pow(n as u32) - 1;
        if translation.len() != dim {
            return Err(Error::ShapeMismatch(format!(
                "translation length {} != {dim}",
                translation.len()
            )));
        }
        if linear.nrows() != dim || linear.ncols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "linear block is {}x{}, expected {dim}x{dim}",
                linear.nrows(),
                linear.ncols()
            )));
        }
        Ok(Self { n, translation, linear })
    }

    /// Number of ququats.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The translation block T.
    pub fn translation(&self) -> &RVec {
        &self.translation
    }

    /// The linear block R.
    pub fn linear(&self) -> &RMat {
        &self.linear
    }

    /// Semidirect-product composition: `self` applied after `other`,
    /// i.e. (T, R)(T', R') = (T + R T', R R').
    pub fn compose(&self, other: &AffineForm) -> Result<AffineForm> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "affine forms on {} and {} ququats",
                self.n, other.n
            )));
        }
        AffineForm::new(
            self.n,
            &self.translation + &self.linear * &other.translation,
            &self.linear * &other.linear,
        )
    }
}

/// Extracts the affine blocks of a trace-preserving transfer matrix.
pub fn to_affine(e: &GateMatrix) -> Result<AffineForm> {
    let defect = (0..e.matrix().ncols())
        .map(|col| {
            let want = if col == 0 { 1.0 } else { 0.0 };
            (e.matrix()[(0, col)] - want).abs()
        })
        .fold(0.0, f64::max);
    if defect > crate::STRUCT_TOL {
        return Err(Error::NotTracePreserving(defect));
    }
    AffineForm::new(e.n(), e.translation(), e.linear_block())
}

/// Embeds affine blocks as the transfer matrix [[1, 0], [T, R]].
pub fn from_affine(a: &AffineForm) -> GateMatrix {
    let dim = 4usize.pow(a.n as u32);
    let mut m = RMat::zeros(dim, dim);
    m[(0, 0)] = 1.0;
    for row in 1..dim {
        m[(row, 0)] = a.translation[row - 1];
        for col in 1..dim {
            m[(row, col)] = a.linear[(row - 1, col - 1)];
        }
    }
    GateMatrix::new(a.n, m).expect("blocks were dimension checked")
}

/// The pure translation gate [[1, 0], [T, I]].
pub fn translation_gate(n: usize, translation: &RVec) -> Result<GateMatrix> {
    let dim = 4usize.pow(n as u32) - 1;
    let a = AffineForm::new(n, translation.clone(), RMat::identity(dim, dim))?;
    Ok(from_affine(&a))
}

/// Splits a trace-preserving matrix as translation times unital part:
/// E(T, R) = E(T, I) * E(0, R).
pub fn split_unital(e: &GateMatrix) -> Result<(GateMatrix, GateMatrix)> {
    let a = to_affine(e)?;
    let dim = a.linear.nrows();
    let translation = translation_gate(a.n, &a.translation)?;
    let unital = from_affine(&AffineForm::new(a.n, RVec::zeros(dim), a.linear.clone())?);
    Ok((translation, unital))
}

/// Singular value decomposition of a trace-preserving transfer matrix:
/// E = E^(T) * U1_hat * D_hat * U2_hat.
#[derive(Debug, Clone)]
pub struct CanonicalDecomposition {
    n: usize,
    translation: RVec,
    u1: GateMatrix,
    d: GateMatrix,
    u2: GateMatrix,
    singular_values: RVec,
}

impl CanonicalDecomposition {
    /// Number of ququats.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The translation block T.
    pub fn translation(&self) -> &RVec {
        &self.translation
    }

    /// The embedded translation gate E^(T).
    pub fn translation_gate(&self) -> GateMatrix {
        translation_gate(self.n, &self.translation).expect("stored blocks are consistent")
    }

    /// The embedded left orthogonal factor.
    pub fn u1(&self) -> &GateMatrix {
        &self.u1
    }

    /// The embedded diagonal factor.
    pub fn d(&self) -> &GateMatrix {
        &self.d
    }

    /// The embedded right orthogonal factor.
    pub fn u2(&self) -> &GateMatrix {
        &self.u2
    }

    /// Singular values of the linear block, descending.
    pub fn singular_values(&self) -> &RVec {
        &self.singular_values
    }

    /// Multiplies the factors back together.
    pub fn reconstruct(&self) -> GateMatrix {
        let inner = compose(&self.d, &self.u2).expect("matching sides");
        let inner = compose(&self.u1, &inner).expect("matching sides");
        compose(&self.translation_gate(), &inner).expect("matching sides")
    }
}

/// Decomposes a trace-preserving transfer matrix by SVD of its linear
/// block.
///
/// Singular values are sorted descending and nonnegative. When the left
/// orthogonal factor comes out with determinant -1, the reflection
/// diag(1, ..., 1, -1) is moved into the right factor so U1 is a proper
/// rotation. A zero linear block decomposes as U1 = U2 = I, all singular
/// values zero.
pub fn svd_decompose(e: &GateMatrix) -> Result<CanonicalDecomposition> {
    let a = to_affine(e)?;
    let dim = a.linear.nrows();
    let (u1, sigma, v_t) = if max_abs_real(&a.linear) == 0.0 {
        (RMat::identity(dim, dim), RVec::zeros(dim), RMat::identity(dim, dim))
    } else {
        let svd = SVD::new(a.linear.clone(), true, true);
        let mut u = svd.u.expect("requested");
        let mut v_t = svd.v_t.expect("requested");
        if u.determinant() < 0.0 {
            for row in 0..dim {
                u[(row, dim - 1)] = -u[(row, dim - 1)];
            }
            for col in 0..dim {
                v_t[(dim - 1, col)] = -v_t[(dim - 1, col)];
            }
        }
        (u, svd.singular_values.clone(), v_t)
    };
    let embed = |r: RMat| -> Result<GateMatrix> {
        Ok(from_affine(&AffineForm::new(a.n, RVec::zeros(dim), r)?))
    };
    Ok(CanonicalDecomposition {
        n: a.n,
        translation: a.translation.clone(),
        u1: embed(u1)?,
        d: embed(RMat::from_diagonal(&sigma))?,
        u2: embed(v_t)?,
        singular_values: sigma,
    })
}
