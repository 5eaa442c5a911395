//! Left and right multiplication superoperators, their complex matrix
//! forms, the Weyl generator basis, and numeric checks of the limit
//! constructions that underlie universality of these generators.
//!
//! For an operator A, left multiplication B -> AB and right
//! multiplication B -> BA' (with A' the adjoint of A) are linear maps on
//! Liouville space. Their matrix elements in the Pauli basis are complex
//! in general, so they are "pseudo-gates": building blocks of physical
//! channels rather than physical gates themselves. Summing the paired
//! products over a Kraus set reproduces the real transfer matrix.

use nalgebra::SVD;
use rand::Rng;

use crate::linalg::{expm, max_abs, real_part};
use crate::liouville::{density_to_pauli, pauli_basis, PauliVector};
use crate::random::random_density;
use crate::superop::{apply, GateMatrix, KrausSet};
use crate::{C64, CMat, CVec, Error, RMat, Result};

/// Complex matrix of a left or right multiplication superoperator in
/// the Pauli basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoGateMatrix {
    n: usize,
    matrix: CMat,
}

impl PseudoGateMatrix {
    /// Wraps a 4^n x 4^n complex matrix.
    pub fn new(n: usize, matrix: CMat) -> Result<Self> {
        let dim = 4usize.pow(n as u32);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{}, expected {dim}x{dim} for {n} ququats",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { n, matrix })
    }

    /// Number of ququats.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The complex matrix.
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }
}

fn ququats_for_side(side: usize) -> Result<usize> {
    if side == 0 || !side.is_power_of_two() {
        return Err(Error::ShapeMismatch(format!(
            "operator side {side} is not a power of two"
        )));
    }
    Ok(side.trailing_zeros() as usize)
}

fn check_square(a: &CMat) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "operator is {}x{}, expected square",
            a.nrows(),
            a.ncols()
        )));
    }
    ququats_for_side(a.nrows())
}

/// Pauli coefficient vector of an arbitrary operator: b_mu =
/// Tr(sigma_mu B) / 2^n. Complex for non-Hermitian B.
pub fn operator_coefficients(b: &CMat) -> Result<CVec> {
    let n = check_square(b)?;
    let basis = pauli_basis(n);
    let scale = 1.0 / (1 << n) as f64;
    Ok(CVec::from_iterator(
        basis.len(),
        basis.iter().map(|sigma| (sigma * b).trace() * scale),
    ))
}

/// Matrix of left multiplication, L_munu = Tr(sigma_mu A sigma_nu) / 2^n.
///
/// Applied to the coefficient vector of B it yields the coefficients of
/// AB.
pub fn left_matrix(a: &CMat) -> Result<PseudoGateMatrix> {
    let n = check_square(a)?;
    let basis = pauli_basis(n);
    let dim = basis.len();
    let scale = 1.0 / (1 << n) as f64;
    let mut m = CMat::zeros(dim, dim);
    for (mu, left) in basis.iter().enumerate() {
        let partial = left * a;
        for (nu, right) in basis.iter().enumerate() {
            m[(mu, nu)] = (&partial * right).trace() * scale;
        }
    }
    PseudoGateMatrix::new(n, m)
}

/// Matrix of right multiplication by the adjoint of the argument,
/// R_munu = Tr(sigma_mu sigma_nu A') / 2^n with A' the adjoint of A.
///
/// Applied to the coefficient vector of B it yields the coefficients of
/// B A'. Entrywise it is the complex conjugate of `left_matrix(a)`.
pub fn right_matrix(a: &CMat) -> Result<PseudoGateMatrix> {
    let n = check_square(a)?;
    let basis = pauli_basis(n);
    let dim = basis.len();
    let scale = 1.0 / (1 << n) as f64;
    let adj = a.adjoint();
    let mut m = CMat::zeros(dim, dim);
    for (mu, left) in basis.iter().enumerate() {
        for (nu, mid) in basis.iter().enumerate() {
            m[(mu, nu)] = (left * mid * &adj).trace() * scale;
        }
    }
    PseudoGateMatrix::new(n, m)
}

/// Single-ququat left multiplication matrix assembled from the four
/// coefficients a_mu = Tr(sigma_mu A) / 2 instead of the generic trace
/// formula.
///
/// L = a_0 I + sum_k a_k (|0)(k| + |k)(0|)
///       + i [a_1 (|3)(2| - |2)(3|) + a_2 (|1)(3| - |3)(1|)
///            + a_3 (|2)(1| - |1)(2|)].
pub fn single_ququat_left_closed_form(a: &CMat) -> Result<PseudoGateMatrix> {
    let n = check_square(a)?;
    if n != 1 {
        return Err(Error::ShapeMismatch(format!(
            "closed form is single ququat only, got {n}"
        )));
    }
    let coeff = operator_coefficients(a)?;
    let i = C64::new(0.0, 1.0);
    let mut m = CMat::zeros(4, 4);
    for d in 0..4 {
        m[(d, d)] = coeff[0];
    }
    for k in 1..4 {
        m[(0, k)] += coeff[k];
        m[(k, 0)] += coeff[k];
    }
    m[(3, 2)] += i * coeff[1];
    m[(2, 3)] -= i * coeff[1];
    m[(1, 3)] += i * coeff[2];
    m[(3, 1)] -= i * coeff[2];
    m[(2, 1)] += i * coeff[3];
    m[(1, 2)] -= i * coeff[3];
    PseudoGateMatrix::new(1, m)
}

/// Transfer matrix of a Kraus channel assembled as the sum of paired
/// pseudo-gate products sum_j L(A_j) R(A_j').
///
/// The sum must come out real; a residual imaginary part above 1e-10
/// is an error.
pub fn ptm_via_pseudogates(k: &KrausSet) -> Result<GateMatrix> {
    let dim = 4usize.pow(k.n() as u32);
    let mut sum = CMat::zeros(dim, dim);
    for op in k.ops() {
        let left = left_matrix(op)?;
        let right = right_matrix(op)?;
        sum += left.matrix() * right.matrix();
    }
    GateMatrix::new(k.n(), real_part(&sum, 1e-10)?)
}

/// Basis superoperator with a single 1 at (mu, nu): H_munu = |mu)(nu|.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylGenerator {
    n: usize,
    mu: usize,
    nu: usize,
    matrix: CMat,
}

impl WeylGenerator {
    /// Number of ququats.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The index pair (mu, nu).
    pub fn indices(&self) -> (usize, usize) {
        (self.mu, self.nu)
    }

    /// The 4^n x 4^n matrix.
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }
}

/// Builds the Weyl generator H_munu on n ququats.
pub fn weyl_generator(n: usize, mu: usize, nu: usize) -> Result<WeylGenerator> {
    let dim = 4usize.pow(n as u32);
    if mu >= dim || nu >= dim {
        return Err(Error::OutOfRange(format!(
            "generator indices ({mu}, {nu}) exceed dimension {dim}"
        )));
    }
    let mut matrix = CMat::zeros(dim, dim);
    matrix[(mu, nu)] = C64::new(1.0, 0.0);
    Ok(WeylGenerator { n, mu, nu, matrix })
}

/// Commutator of two Weyl generators as a plain matrix.
///
/// Equals delta_{nu alpha} H_{mu beta} - delta_{mu beta} H_{alpha nu}
/// exactly.
pub fn weyl_bracket(g1: &WeylGenerator, g2: &WeylGenerator) -> Result<CMat> {
    if g1.n != g2.n {
        return Err(Error::ShapeMismatch(format!(
            "generators on {} and {} ququats",
            g1.n, g2.n
        )));
    }
    Ok(&g1.matrix * &g2.matrix - &g2.matrix * &g1.matrix)
}

/// The (4^n)^2 Hermitian generators spanning all self-adjoint
/// superoperators: the diagonal dyads |a)(a|, the symmetric sums
/// |a)(b| + |b)(a|, and the antisymmetric combinations
/// -i(|a)(b| - |b)(a|) for a < b.
pub fn hermitian_basis(n: usize) -> Result<Vec<CMat>> {
    if !(1..=2).contains(&n) {
        return Err(Error::OutOfRange(format!(
            "hermitian basis supported for 1 or 2 ququats, got {n}"
        )));
    }
    let dim = 4usize.pow(n as u32);
    let i = C64::new(0.0, 1.0);
    let mut out = Vec::with_capacity(dim * dim);
    for a in 0..dim {
        let mut m = CMat::zeros(dim, dim);
        m[(a, a)] = C64::new(1.0, 0.0);
        out.push(m);
    }
    for a in 0..dim {
        for b in (a + 1)..dim {
            let mut sym = CMat::zeros(dim, dim);
            sym[(a, b)] = C64::new(1.0, 0.0);
            sym[(b, a)] = C64::new(1.0, 0.0);
            out.push(sym);
            let mut anti = CMat::zeros(dim, dim);
            anti[(a, b)] = -i;
            anti[(b, a)] = i;
            out.push(anti);
        }
    }
    Ok(out)
}

/// Rank of a set of equal-sized complex matrices, each flattened into a
/// real row vector (real parts then imaginary parts), at the given
/// singular value tolerance.
pub fn flattened_rank(mats: &[CMat], tol: f64) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let per = mats[0].len();
    let mut stacked = RMat::zeros(mats.len(), 2 * per);
    for (row, m) in mats.iter().enumerate() {
        for (col, entry) in m.iter().enumerate() {
            stacked[(row, col)] = entry.re;
            stacked[(row, per + col)] = entry.im;
        }
    }
    SVD::new(stacked, false, false)
        .singular_values
        .iter()
        .filter(|s| **s > tol)
        .count()
}

fn matrix_power(m: &CMat, e: usize) -> CMat {
    let mut result = CMat::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    result
}

fn check_generator_pair(h1: &CMat, h2: &CMat) -> Result<()> {
    if h1.nrows() != h1.ncols() || h2.nrows() != h2.ncols() || h1.nrows() != h2.nrows() {
        return Err(Error::ShapeMismatch(format!(
            "generators are {}x{} and {}x{}, expected equal square",
            h1.nrows(),
            h1.ncols(),
            h2.nrows(),
            h2.ncols()
        )));
    }
    Ok(())
}

/// Error sequence of the group-commutator approximation to
/// exp(t [H1, H2]).
///
/// For each m the product (exp(-s H2) exp(s H1) exp(s H2) exp(-s H1))^m
/// with s = sqrt(t/m) is compared with the exact exponential; the
/// returned errors are max-entry norms of the differences and decrease
/// toward zero as m grows.
pub fn commutator_limit_check(h1: &CMat, h2: &CMat, t: f64, steps: &[usize]) -> Result<Vec<f64>> {
    check_generator_pair(h1, h2)?;
    if t < 0.0 {
        return Err(Error::OutOfRange(format!("target time {t} is negative")));
    }
    let bracket = h1 * h2 - h2 * h1;
    let target = expm(&(bracket * C64::new(t, 0.0)));
    steps
        .iter()
        .map(|&m| {
            if m == 0 {
                return Err(Error::OutOfRange("step count 0".into()));
            }
            let s = C64::new((t / m as f64).sqrt(), 0.0);
            let factor = expm(&(-h2 * s)) * expm(&(h1 * s)) * expm(&(h2 * s)) * expm(&(-h1 * s));
            Ok(max_abs(&(&target - matrix_power(&factor, m))))
        })
        .collect()
}

/// Error sequence of the alternating-product approximation to
/// exp(i (a H1 + b H2)).
///
/// For each m the product (exp(i a H1 / m) exp(i b H2 / m))^m is
/// compared with the exact exponential; errors decrease toward zero and
/// vanish identically for commuting generators.
pub fn linear_combination_limit_check(
    h1: &CMat,
    h2: &CMat,
    a: C64,
    b: C64,
    steps: &[usize],
) -> Result<Vec<f64>> {
    check_generator_pair(h1, h2)?;
    let i = C64::new(0.0, 1.0);
    let target = expm(&((h1 * a + h2 * b) * i));
    steps
        .iter()
        .map(|&m| {
            if m == 0 {
                return Err(Error::OutOfRange("step count 0".into()));
            }
            let inv = C64::new(1.0 / m as f64, 0.0);
            let factor = expm(&(h1 * (i * a * inv))) * expm(&(h2 * (i * b * inv)));
            Ok(max_abs(&(&target - matrix_power(&factor, m))))
        })
        .collect()
}

/// The two-ququat twist pseudo-gate: the 16x16 permutation sending
/// basis index (mu1, mu2) to (mu2, mu1).
pub fn swap_pseudogate() -> PseudoGateMatrix {
    let mut m = CMat::zeros(16, 16);
    for mu1 in 0..4 {
        for mu2 in 0..4 {
            m[(4 * mu2 + mu1, 4 * mu1 + mu2)] = C64::new(1.0, 0.0);
        }
    }
    PseudoGateMatrix::new(2, m).expect("fixed dimensions")
}

/// Searches for a product input state whose image under `e` is not a
/// product state, witnessing that `e` does not preserve products.
///
/// Each trial draws random single-ququat densities rho_1, rho_2,
/// applies `e` to their tensored coefficient vector, reshapes the
/// output into the 4x4 coefficient matrix over the two factors and
/// tests its rank. A second singular value above 1e-8 means the output
/// is not a product, and the witnessing input pair is returned. `None`
/// after the requested trials proves nothing: the check is one sided.
pub fn imprimitivity_witness<R: Rng>(
    e: &GateMatrix,
    samples: usize,
    rng: &mut R,
) -> Result<Option<(PauliVector, PauliVector)>> {
    if e.n() != 2 {
        return Err(Error::ShapeMismatch(format!(
            "product-preservation check needs 2 ququats, got {}",
            e.n()
        )));
    }
    for _ in 0..samples {
        let p1 = density_to_pauli(&random_density(1, rng))?;
        let p2 = density_to_pauli(&random_density(1, rng))?;
        let out = apply(e, &p1.tensor(&p2))?;
        let coeffs = out.coeffs();
        let reshaped = RMat::from_fn(4, 4, |r, c| coeffs[4 * r + c]);
        let singular = SVD::new(reshaped, false, false).singular_values;
        if singular[1] > 1e-8 {
            return Ok(Some((p1, p2)));
        }
    }
    Ok(None)
}
