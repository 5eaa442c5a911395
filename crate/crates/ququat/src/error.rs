use thiserror::Error;

/// Errors reported by state, gate and logic constructors and conversions.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix or vector had the wrong dimensions for the requested
    /// operation.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// An index, digit or parameter was outside its admissible range.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A matrix required to be Hermitian was not, within tolerance.
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),

    /// A density matrix did not have unit trace.
    #[error("trace is {0}, expected 1")]
    NotUnitTrace(crate::C64),

    /// A quantity that must be real carried a significant imaginary part.
    #[error("imaginary residue {0:.3e} above tolerance")]
    ImaginaryResidue(f64),

    /// A coefficient vector did not satisfy the unit-trace normalisation
    /// (leading coefficient 1).
    #[error("coefficient vector is not normalised: leading entry {0}, expected exactly 1")]
    NotNormalised(f64),

    /// A map that must be completely positive had a Choi matrix with a
    /// negative eigenvalue below tolerance.
    #[error("map is not completely positive (minimum Choi eigenvalue {0:.3e})")]
    NotCompletelyPositive(f64),

    /// A matrix required to be unitary was not, within tolerance.
    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),

    /// Operators required to form a projective measurement were not
    /// orthogonal projectors resolving the identity.
    #[error("not a projective measurement: {0}")]
    NotProjective(String),

    /// A gate matrix required to be trace preserving was not.
    #[error("gate is not trace preserving (defect {0:.3e})")]
    NotTracePreserving(f64),

    /// A measurement branch had zero probability, so no conditional state
    /// exists.
    #[error("measurement branch {0} has probability {1:.3e}, below cutoff")]
    ZeroProbabilityBranch(usize, f64),

    /// A channel output had (numerically) zero trace, so it cannot be
    /// renormalised.
    #[error("channel output has vanishing trace ({0:.3e}); cannot normalise")]
    VanishingTrace(f64),

    /// A logic gate, basis element or expression referred to an unknown
    /// name.
    #[error("unknown name: {0}")]
    UnknownName(String),

    /// A logic expression could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}
