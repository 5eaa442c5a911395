//! Gate and channel representations: real transfer matrices over the Pauli
//! basis (gate matrices), Kraus operator lists and Choi matrices, with the
//! conversions between them and the structural predicates that classify a
//! channel (trace preserving, unital, completely positive, orthogonal,
//! trace decreasing).
//!
//! The transfer matrix of a map `E` is `E_munu = (1/2^n) Tr(sigma_mu
//! E(sigma_nu))`. It is always real, acts on coefficient vectors by plain
//! matrix multiplication, and is trace preserving exactly when its row 0 is
//! `(1, 0, ..., 0)` and unital exactly when its column 0 is the same vector.

use crate::linalg;
use crate::liouville::{pauli_basis, PauliVector};
use crate::{C64, CMat, CVec, Error, RMat, RVec, Result, PSD_TOL, STRUCT_TOL};

/// Eigenvalues below this are discarded when extracting Kraus operators
/// from a Choi matrix.
pub const KRAUS_EIGENVALUE_CUTOFF: f64 = 1e-12;

/// Denominator cutoff for nonlinear (normalising) gate application.
pub const NONLINEAR_CUTOFF: f64 = 1e-12;

/// A real 4^n x 4^n transfer matrix acting on Pauli coefficient vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    n: usize,
    mat: RMat,
}

impl GateMatrix {
    /// Wraps a real 4^n x 4^n matrix.
    pub fn new(n: usize, mat: RMat) -> Result<Self> {
        let dim = 4usize.pow(n as u32);
        if n == 0 {
            return Err(Error::OutOfRange("ququat count must be at least 1".into()));
        }
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "gate matrix is {}x{}, expected {dim}x{dim}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { n, mat })
    }

    /// The identity gate on `n` ququats.
    pub fn identity(n: usize) -> Self {
        let dim = 4usize.pow(n as u32);
        Self {
            n,
            mat: RMat::identity(dim, dim),
        }
    }

    /// Number of ququats.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &RMat {
        &self.mat
    }

    /// The translation part: column 0 below row 0 (length 4^n - 1).
    pub fn translation(&self) -> RVec {
        let dim = self.mat.nrows();
        RVec::from_fn(dim - 1, |k, _| self.mat[(k + 1, 0)])
    }

    /// The linear block: the lower-right (4^n - 1) square submatrix.
    pub fn linear_block(&self) -> RMat {
        let dim = self.mat.nrows();
        self.mat.view((1, 1), (dim - 1, dim - 1)).into_owned()
    }
}

/// A list of Kraus operators `A_j` on the 2^n-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    n: usize,
    ops: Vec<CMat>,
}

impl KrausSet {
    /// Wraps a nonempty list of 2^n x 2^n operators.
    pub fn new(n: usize, ops: Vec<CMat>) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("ququat count must be at least 1".into()));
        }
        if ops.is_empty() {
            return Err(Error::ShapeMismatch("empty Kraus list".into()));
        }
        let side = 1usize << n;
        for (j, a) in ops.iter().enumerate() {
            if a.nrows() != side || a.ncols() != side {
                return Err(Error::ShapeMismatch(format!(
                    "Kraus operator {j} is {}x{}, expected {side}x{side}",
                    a.nrows(),
                    a.ncols()
                )));
            }
        }
        Ok(Self { n, ops })
    }

    /// Number of ququats.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The operators.
    pub fn ops(&self) -> &[CMat] {
        &self.ops
    }

    /// `sum_j A_j^dagger A_j`.
    pub fn completeness_sum(&self) -> CMat {
        let side = 1usize << self.n;
        let mut s = CMat::zeros(side, side);
        for a in &self.ops {
            s += a.adjoint() * a;
        }
        s
    }

    /// Trace preserving: `sum A_j^dagger A_j = I` within tolerance.
    pub fn is_trace_preserving(&self) -> bool {
        let side = 1usize << self.n;
        linalg::max_diff(&self.completeness_sum(), &CMat::identity(side, side)) < STRUCT_TOL
    }

    /// Trace decreasing: `I - sum A_j^dagger A_j` positive semidefinite.
    pub fn is_trace_decreasing(&self) -> bool {
        let side = 1usize << self.n;
        let gap = CMat::identity(side, side) - self.completeness_sum();
        nalgebra::SymmetricEigen::new(gap)
            .eigenvalues
            .iter()
            .all(|&x| x >= PSD_TOL)
    }
}

/// The (unnormalised) Choi matrix `sum_kl |k><l| (x) E(|k><l|)` of a map on
/// `n` ququats. The map is completely positive exactly when this matrix is
/// positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    n: usize,
    mat: CMat,
}

impl ChoiMatrix {
    /// Wraps a Hermitian 4^n x 4^n matrix.
    pub fn new(n: usize, mat: CMat) -> Result<Self> {
        let dim = 4usize.pow(n as u32);
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "Choi matrix is {}x{}, expected {dim}x{dim}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let defect = linalg::hermiticity_defect(&mat);
        if defect > STRUCT_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { n, mat })
    }

    /// Number of ququats.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// Minimum eigenvalue (real; the matrix is Hermitian).
    pub fn min_eigenvalue(&self) -> f64 {
        nalgebra::SymmetricEigen::new(self.mat.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Applies a gate matrix to a coefficient vector: `P' = E P`.
///
/// The output is a raw coefficient vector; its leading entry stays 1 when
/// `E` is trace preserving and equals the output trace otherwise.
pub fn apply(e: &GateMatrix, p: &PauliVector) -> Result<PauliVector> {
    if e.n != p.n() {
        return Err(Error::ShapeMismatch(format!(
            "gate on {} ququats applied to state on {}",
            e.n,
            p.n()
        )));
    }
    PauliVector::raw(e.n, &e.mat * p.coeffs())
}

/// Transfer matrix of a channel given by Kraus operators:
/// `E_munu = (1/2^n) sum_j Tr(sigma_mu A_j sigma_nu A_j^dagger)`.
pub fn ptm_from_kraus(k: &KrausSet) -> Result<GateMatrix> {
    ptm_from_ops(k.n, &k.ops)
}

/// Transfer matrix of unitary conjugation:
/// `E_munu = (1/2^n) Tr(sigma_mu U sigma_nu U^dagger)`.
///
/// The result is orthogonal and unital; a global phase on `U` drops out.
pub fn ptm_from_unitary(u: &CMat) -> Result<GateMatrix> {
    let side = u.nrows();
    if side != u.ncols() || !side.is_power_of_two() || side < 2 {
        return Err(Error::ShapeMismatch(format!(
            "unitary is {}x{}, expected square power-of-two side",
            u.nrows(),
            u.ncols()
        )));
    }
    let defect = linalg::max_diff(&(u * u.adjoint()), &CMat::identity(side, side));
    if defect > STRUCT_TOL {
        return Err(Error::NotUnitary(defect));
    }
    let n = side.trailing_zeros() as usize;
    ptm_from_ops(n, std::slice::from_ref(u))
}

/// Shared transfer-matrix construction over a list of (not necessarily
/// complete) Kraus operators.
pub(crate) fn ptm_from_ops(n: usize, ops: &[CMat]) -> Result<GateMatrix> {
    let basis = pauli_basis(n);
    let dim = basis.len();
    let scale = 1.0 / (1usize << n) as f64;
    let mut mat = RMat::zeros(dim, dim);
    let mut worst_imag = 0.0f64;
    for (nu, sigma_nu) in basis.iter().enumerate() {
        // E(sigma_nu) = sum_j A_j sigma_nu A_j^dagger
        let side = 1usize << n;
        let mut image = CMat::zeros(side, side);
        for a in ops {
            image += a * sigma_nu * a.adjoint();
        }
        for (mu, sigma_mu) in basis.iter().enumerate() {
            let t: C64 = (sigma_mu * &image).trace();
            worst_imag = worst_imag.max(t.im.abs());
            mat[(mu, nu)] = scale * t.re;
        }
    }
    if worst_imag > STRUCT_TOL {
        return Err(Error::ImaginaryResidue(worst_imag));
    }
    GateMatrix::new(n, mat)
}

/// Row-0 test for trace preservation: `E_0nu = delta_0nu`.
pub fn is_trace_preserving(e: &GateMatrix) -> bool {
    let dim = e.mat.nrows();
    (0..dim).all(|nu| {
        let expected = if nu == 0 { 1.0 } else { 0.0 };
        (e.mat[(0, nu)] - expected).abs() < STRUCT_TOL
    })
}

/// Column-0 test for unitality: `E_mu0 = delta_mu0`.
pub fn is_unital(e: &GateMatrix) -> bool {
    let dim = e.mat.nrows();
    (0..dim).all(|mu| {
        let expected = if mu == 0 { 1.0 } else { 0.0 };
        (e.mat[(mu, 0)] - expected).abs() < STRUCT_TOL
    })
}

/// Orthogonality test: `E E^T = I` within tolerance.
pub fn is_orthogonal(e: &GateMatrix) -> bool {
    let dim = e.mat.nrows();
    linalg::max_diff_real(&(&e.mat * e.mat.transpose()), &RMat::identity(dim, dim)) < STRUCT_TOL
}

/// The Choi matrix of a channel in Kraus form:
/// `C = sum_j vec(A_j) vec(A_j)^dagger` with column-major vectorisation.
pub fn choi_from_kraus(k: &KrausSet) -> ChoiMatrix {
    let dim = 4usize.pow(k.n as u32);
    let mut c = CMat::zeros(dim, dim);
    for a in &k.ops {
        let v = linalg::vec_col(a);
        c += &v * v.adjoint();
    }
    ChoiMatrix { n: k.n, mat: c }
}

/// The Choi matrix of the channel a gate matrix represents, obtained by
/// pushing every computational matrix unit `|k><l|` through the transfer
/// matrix.
pub fn choi_from_ptm(e: &GateMatrix) -> ChoiMatrix {
    let side = 1usize << e.n;
    let dim = 4usize.pow(e.n as u32);
    let basis = pauli_basis(e.n);
    let scale = C64::new(1.0 / side as f64, 0.0);
    let mut c = CMat::zeros(dim, dim);
    for k in 0..side {
        for l in 0..side {
            // coefficients of |k><l| over the Pauli basis: Tr(sigma_nu |k><l|) = sigma_nu[l,k]
            let coeffs = CVec::from_fn(dim, |nu, _| basis[nu][(l, k)]);
            // image coefficients d = E c (E real, c complex)
            let d = CVec::from_fn(dim, |mu, _| {
                (0..dim)
                    .map(|nu| C64::new(e.mat[(mu, nu)], 0.0) * coeffs[nu])
                    .sum()
            });
            // image operator (1/2^n) sum_mu d_mu sigma_mu
            let mut image = CMat::zeros(side, side);
            for mu in 0..dim {
                image += &basis[mu] * d[mu];
            }
            image *= scale;
            for r in 0..side {
                for s in 0..side {
                    c[(k * side + r, l * side + s)] += image[(r, s)];
                }
            }
        }
    }
    // symmetrise away construction dust so the Hermiticity gate is exact
    let c = (&c + c.adjoint()) * C64::new(0.5, 0.0);
    ChoiMatrix { n: e.n, mat: c }
}

/// Complete positivity: minimum Choi eigenvalue above the PSD threshold.
pub fn is_completely_positive(e: &GateMatrix) -> bool {
    choi_from_ptm(e).min_eigenvalue() >= PSD_TOL
}

/// Extracts a Kraus list from a positive Choi matrix by
/// eigendecomposition: `A_j = sqrt(lambda_j) unvec(v_j)`, dropping
/// eigenvalues below [`KRAUS_EIGENVALUE_CUTOFF`].
pub fn kraus_from_choi(c: &ChoiMatrix) -> Result<KrausSet> {
    let eig = nalgebra::SymmetricEigen::new(c.mat.clone());
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < PSD_TOL {
        return Err(Error::NotCompletelyPositive(min));
    }
    let side = 1usize << c.n;
    let mut ops = Vec::new();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < KRAUS_EIGENVALUE_CUTOFF {
            continue;
        }
        let v = eig.eigenvectors.column(j).into_owned();
        ops.push(linalg::unvec_col(&v, side) * C64::new(lambda.sqrt(), 0.0));
    }
    if ops.is_empty() {
        // the zero channel: represent it by a single zero operator
        ops.push(CMat::zeros(side, side));
    }
    KrausSet::new(c.n, ops)
}

/// Matrix-product composition; the right operand acts first.
pub fn compose(e1: &GateMatrix, e2: &GateMatrix) -> Result<GateMatrix> {
    if e1.n != e2.n {
        return Err(Error::ShapeMismatch(format!(
            "composing gates on {} and {} ququats",
            e1.n, e2.n
        )));
    }
    Ok(GateMatrix {
        n: e1.n,
        mat: &e1.mat * &e2.mat,
    })
}

/// Tensor product; the left operand supplies the high (leftmost) index
/// digits.
pub fn tensor(e1: &GateMatrix, e2: &GateMatrix) -> GateMatrix {
    GateMatrix {
        n: e1.n + e2.n,
        mat: e1.mat.kronecker(&e2.mat),
    }
}

/// The adjoint gate: the transpose of the transfer matrix.
pub fn adjoint(e: &GateMatrix) -> GateMatrix {
    GateMatrix {
        n: e.n,
        mat: e.mat.transpose(),
    }
}

/// The trace of the channel output: `Tr E(rho) = sum_mu E_0mu P_mu`.
pub fn trace_functional(e: &GateMatrix, p: &PauliVector) -> Result<f64> {
    if e.n != p.n() {
        return Err(Error::ShapeMismatch(format!(
            "gate on {} ququats applied to state on {}",
            e.n,
            p.n()
        )));
    }
    Ok((0..e.mat.ncols()).map(|nu| e.mat[(0, nu)] * p.coeffs()[nu]).sum())
}

/// Row-0 norm bound satisfied by every trace-decreasing map:
/// `sum_mu (E_0mu)^2 <= 1`.
pub fn satisfies_trace_decreasing_bound(e: &GateMatrix) -> bool {
    let sum: f64 = (0..e.mat.ncols()).map(|nu| e.mat[(0, nu)].powi(2)).sum();
    sum <= 1.0 + 1e-12
}

/// Applies a trace-decreasing gate and renormalises the output:
/// `P' = E P / Tr E(rho)`. The leading output coefficient is exactly 1.
pub fn nonlinear_apply(e: &GateMatrix, p: &PauliVector) -> Result<PauliVector> {
    let raw = apply(e, p)?;
    let t = raw.coeffs()[0];
    if t.abs() <= NONLINEAR_CUTOFF {
        return Err(Error::VanishingTrace(t));
    }
    let coeffs = raw.coeffs() / t;
    PauliVector::state(e.n, coeffs)
}
