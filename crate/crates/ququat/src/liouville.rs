//! Pauli (Liouville) space: operator kets, the tensor Pauli basis, density
//! matrices and their real coefficient vectors.
//!
//! An `n`-ququat state is a density matrix on a 2^n-dimensional Hilbert
//! space. Expanded over the tensor Pauli basis it becomes a real vector of
//! 4^n coefficients
//!
//! ```text
//!     rho = (1/2^n) sum_mu P_mu sigma_mu,      P_mu = Tr(sigma_mu rho),
//! ```
//!
//! with `P_0 = 1` fixed by normalisation. Multi-indices are packed base-4
//! with the first digit most significant: digit 1 addresses ququat 0, the
//! leftmost tensor factor.

use crate::linalg;
use crate::{C64, CMat, Error, RVec, Result, STRUCT_TOL};

/// Complex zero.
const Z0: C64 = C64::new(0.0, 0.0);
/// Complex one.
const Z1: C64 = C64::new(1.0, 0.0);
/// Complex i.
const ZI: C64 = C64::new(0.0, 1.0);

/// A packed base-4 multi-index over `n` ququats.
///
/// `value = mu_1 * 4^(n-1) + ... + mu_n`, so digit 1 is the most
/// significant and addresses the leftmost tensor factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliIndex {
    n: usize,
    value: usize,
}

impl PauliIndex {
    /// Builds an index from its packed value. `value` must lie in `[0, 4^n)`.
    pub fn new(n: usize, value: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("ququat count must be at least 1".into()));
        }
        let dim = 4usize.pow(n as u32);
        if value >= dim {
            return Err(Error::OutOfRange(format!(
                "index {value} not below 4^{n} = {dim}"
            )));
        }
        Ok(Self { n, value })
    }

    /// Builds an index from base-4 digits, first digit most significant.
    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::OutOfRange("empty digit list".into()));
        }
        let mut value = 0usize;
        for &d in digits {
            if d > 3 {
                return Err(Error::OutOfRange(format!("digit {d} not in 0..=3")));
            }
            value = value * 4 + d as usize;
        }
        Self::new(digits.len(), value)
    }

    /// Base-4 digits, first digit most significant.
    pub fn digits(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.n];
        let mut v = self.value;
        for slot in out.iter_mut().rev() {
            *slot = (v % 4) as u8;
            v /= 4;
        }
        out
    }

    /// Packed value in `[0, 4^n)`.
    pub fn value(&self) -> usize {
        self.value
    }

    /// Number of ququats the index addresses.
    pub fn n(&self) -> usize {
        self.n
    }
}

/// The 2x2 Pauli matrix `sigma_k` for `k` in `0..=3` (identity, x, y, z).
pub fn pauli_2x2(k: u8) -> CMat {
    match k {
        0 => CMat::from_row_slice(2, 2, &[Z1, Z0, Z0, Z1]),
        1 => CMat::from_row_slice(2, 2, &[Z0, Z1, Z1, Z0]),
        2 => CMat::from_row_slice(2, 2, &[Z0, -ZI, ZI, Z0]),
        3 => CMat::from_row_slice(2, 2, &[Z1, Z0, Z0, -Z1]),
        _ => panic!("Pauli label {k} not in 0..=3"),
    }
}

/// The tensor Pauli string `sigma_mu = sigma_{mu_1} x ... x sigma_{mu_n}`.
pub fn pauli_matrix(mu: &PauliIndex) -> CMat {
    let digits = mu.digits();
    let mut m = pauli_2x2(digits[0]);
    for &d in &digits[1..] {
        m = m.kronecker(&pauli_2x2(d));
    }
    m
}

/// All 4^n Pauli strings in index order.
pub fn pauli_basis(n: usize) -> Vec<CMat> {
    (0..4usize.pow(n as u32))
        .map(|v| pauli_matrix(&PauliIndex::new(n, v).expect("value below 4^n")))
        .collect()
}

/// An arbitrary element `|A)` of Liouville space: any complex 2^n x 2^n
/// matrix, not necessarily a state.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorKet {
    n: usize,
    mat: CMat,
}

impl OperatorKet {
    /// Wraps a square matrix whose side is a power of two.
    pub fn new(mat: CMat) -> Result<Self> {
        let n = ququat_count(&mat)?;
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
}

/// The Liouville inner product `(A|B) = Tr(A^dagger B)`.
pub fn liouville_inner(a: &OperatorKet, b: &OperatorKet) -> Result<C64> {
    if a.n != b.n {
        return Err(Error::ShapeMismatch(format!(
            "inner product between {} and {} ququats",
            a.n, b.n
        )));
    }
    Ok(a.mat
        .iter()
        .zip(b.mat.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Whether a physical-state candidate passed the positivity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateValidity {
    /// Positive semidefinite within tolerance: a physical state.
    Physical,
    /// The matrix has a negative eigenvalue; it is a formal element of
    /// Liouville space but not a physical state.
    NonPositive {
        /// The offending minimum eigenvalue.
        min_eigenvalue: f64,
    },
}

impl StateValidity {
    /// True for [`StateValidity::Physical`].
    pub fn is_physical(&self) -> bool {
        matches!(self, StateValidity::Physical)
    }
}

/// A Hermitian, unit-trace matrix on the 2^n-dimensional Hilbert space.
///
/// The validating constructor additionally requires positive
/// semidefiniteness (minimum eigenvalue above [`crate::PSD_TOL`]);
/// [`pauli_to_density`] can yield matrices that fail that check, flagged
/// through [`StateValidity`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    mat: CMat,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(mat: CMat) -> Result<Self> {
        let rho = Self::new_signed(mat)?;
        let min = rho.min_eigenvalue();
        if min < crate::PSD_TOL {
            return Err(Error::NotCompletelyPositive(min));
        }
        Ok(rho)
    }

    /// Validates Hermiticity and unit trace only, admitting non-positive
    /// matrices (used for flagged conversion results).
    pub fn new_signed(mat: CMat) -> Result<Self> {
        let n = ququat_count(&mat)?;
        let defect = linalg::hermiticity_defect(&mat);
        if defect > STRUCT_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = mat.trace();
        if (tr - Z1).norm() > STRUCT_TOL {
            return Err(Error::NotUnitTrace(tr));
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

    /// Minimum eigenvalue (the matrix is Hermitian, so real).
    pub fn min_eigenvalue(&self) -> f64 {
        nalgebra::SymmetricEigen::new(self.mat.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Positivity status at the [`crate::PSD_TOL`] threshold.
    pub fn validity(&self) -> StateValidity {
        let min = self.min_eigenvalue();
        if min >= crate::PSD_TOL {
            StateValidity::Physical
        } else {
            StateValidity::NonPositive {
                min_eigenvalue: min,
            }
        }
    }
}

/// A real Pauli coefficient vector of length 4^n.
///
/// States carry `P_0 = 1` exactly. Vectors produced mid-computation by
/// trace-decreasing gates legitimately have `P_0 < 1`; they are built with
/// [`PauliVector::raw`] and report `false` from [`PauliVector::is_normalised`].
#[derive(Debug, Clone, PartialEq)]
pub struct PauliVector {
    n: usize,
    coeffs: RVec,
}

impl PauliVector {
    /// Builds a normalised state vector; the leading coefficient must be
    /// exactly 1.
    pub fn state(n: usize, coeffs: RVec) -> Result<Self> {
        let v = Self::raw(n, coeffs)?;
        if v.coeffs[0] != 1.0 {
            return Err(Error::NotNormalised(v.coeffs[0]));
        }
        Ok(v)
    }

    /// Builds an arbitrary coefficient vector (shape-checked only).
    pub fn raw(n: usize, coeffs: RVec) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("ququat count must be at least 1".into()));
        }
        let dim = 4usize.pow(n as u32);
        if coeffs.len() != dim {
            return Err(Error::ShapeMismatch(format!(
                "coefficient vector has length {}, expected 4^{n} = {dim}",
                coeffs.len()
            )));
        }
        Ok(Self { n, coeffs })
    }

    /// Number of ququats.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The coefficients, indexed by packed Pauli index.
    pub fn coeffs(&self) -> &RVec {
        &self.coeffs
    }

    /// Whether the leading coefficient is exactly 1.
    pub fn is_normalised(&self) -> bool {
        self.coeffs[0] == 1.0
    }

    /// Tensor product: `self` supplies the high (leftmost) digits.
    pub fn tensor(&self, other: &PauliVector) -> PauliVector {
        let dim_b = other.coeffs.len();
        let mut coeffs = RVec::zeros(self.coeffs.len() * dim_b);
        for (a, &pa) in self.coeffs.iter().enumerate() {
            for (b, &pb) in other.coeffs.iter().enumerate() {
                coeffs[a * dim_b + b] = pa * pb;
            }
        }
        PauliVector {
            n: self.n + other.n,
            coeffs,
        }
    }
}

/// Expands a density matrix over the Pauli basis: `coeffs[mu] =
/// Tr(sigma_mu rho)`.
pub fn density_to_pauli(rho: &DensityMatrix) -> Result<PauliVector> {
    let basis = pauli_basis(rho.n);
    let dim = basis.len();
    let mut coeffs = RVec::zeros(dim);
    let mut worst_imag = 0.0f64;
    for (mu, sigma) in basis.iter().enumerate() {
        // Tr(sigma rho) = sum_ab sigma[a,b] rho[b,a]
        let t: C64 = (sigma * &rho.mat).trace();
        worst_imag = worst_imag.max(t.im.abs());
        coeffs[mu] = t.re;
    }
    if worst_imag > STRUCT_TOL {
        return Err(Error::ImaginaryResidue(worst_imag));
    }
    // Tr rho = 1 within tolerance; pin the convention exactly.
    coeffs[0] = 1.0;
    PauliVector::state(rho.n, coeffs)
}

/// Rebuilds the density matrix `rho = (1/2^n) sum_mu P_mu sigma_mu`.
///
/// The result is Hermitian with unit trace by construction; positivity is
/// reported through the returned [`StateValidity`] rather than enforced,
/// since coefficient vectors outside the state set arise legitimately in
/// intermediate computations.
pub fn pauli_to_density(p: &PauliVector) -> Result<(DensityMatrix, StateValidity)> {
    if !p.is_normalised() {
        return Err(Error::NotNormalised(p.coeffs[0]));
    }
    let rho = DensityMatrix::new_signed(pauli_to_operator(p))?;
    let validity = rho.validity();
    Ok((rho, validity))
}

/// The raw Liouville-space resummation `(1/2^n) sum_mu c_mu sigma_mu`
/// without any state checks.
pub fn pauli_to_operator(p: &PauliVector) -> CMat {
    let basis = pauli_basis(p.n);
    let side = 1usize << p.n;
    let mut mat = CMat::zeros(side, side);
    for (mu, sigma) in basis.iter().enumerate() {
        if p.coeffs[mu] != 0.0 {
            mat += sigma * C64::new(p.coeffs[mu], 0.0);
        }
    }
    mat / C64::new(side as f64, 0.0)
}

/// The generalized computational state `|mu]`: coefficient 1 on index 0
/// and, for `mu != 0`, coefficient 1 on `mu`.
pub fn comp_state(mu: &PauliIndex) -> PauliVector {
    let dim = 4usize.pow(mu.n as u32);
    let mut coeffs = RVec::zeros(dim);
    coeffs[0] = 1.0;
    if mu.value != 0 {
        coeffs[mu.value] = 1.0;
    }
    PauliVector {
        n: mu.n,
        coeffs,
    }
}

/// The purity `Tr rho^2 = (1/2^n) sum_mu P_mu^2` of a normalised state.
pub fn purity(p: &PauliVector) -> f64 {
    p.coeffs.iter().map(|x| x * x).sum::<f64>() / (1usize << p.n) as f64
}

/// Weights expressing a single-ququat state over the generalized
/// computational states: `|rho] = sum_mu w_mu |mu]` with
/// `w = (1 - P_1 - P_2 - P_3, P_1, P_2, P_3)`.
pub fn decompose_single_ququat(p: &PauliVector) -> Result<[f64; 4]> {
    if p.n != 1 {
        return Err(Error::ShapeMismatch(format!(
            "decomposition defined for 1 ququat, got {}",
            p.n
        )));
    }
    let c = &p.coeffs;
    Ok([1.0 - c[1] - c[2] - c[3], c[1], c[2], c[3]])
}

/// Side-length check: returns `n` such that the matrix is 2^n x 2^n.
fn ququat_count(mat: &CMat) -> Result<usize> {
    let side = mat.nrows();
    if side != mat.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "matrix is {}x{}, expected square",
            mat.nrows(),
            mat.ncols()
        )));
    }
    if side < 2 || !side.is_power_of_two() {
        return Err(Error::ShapeMismatch(format!(
            "matrix side {side} is not a power of two at least 2"
        )));
    }
    Ok(side.trailing_zeros() as usize)
}
