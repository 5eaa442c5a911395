//! Mixed-state quantum computation in the Pauli (Liouville) representation.
//!
//! States of `n` two-level systems are stored as real coefficient vectors
//! over the Pauli operator basis, and gates as real 4^n x 4^n transfer
//! matrices acting on those vectors. This makes mixed-state circuits,
//! non-unitary channels and measurement superoperators first-class objects:
//! everything is real linear algebra, and unitary gates show up as
//! orthogonal matrices.
//!
//! The crate is organised around that representation:
//!
//! * [`liouville`]: Pauli operator basis, density matrices, coefficient
//!   vectors and conversions between them.
//! * [`superop`]: gate (transfer) matrices, Kraus sets, Choi matrices and
//!   the conversions and structural predicates connecting them.
//! * [`gatelib`]: transfer matrices of the standard named gates (Pauli
//!   conjugations, Hadamard, rotations, reflections, measurement gates).
//! * [`fourlogic`]: classical four-valued logic (tables, expressions, laws)
//!   and its compilation onto gate matrices.
//! * [`canon`]: affine canonical form and the orthogonal/diagonal
//!   factorisation of trace-preserving gates.
//! * [`pseudogate`]: one-sided multiplication superoperators, Weyl
//!   generators and the limit constructions built from them.
//! * [`oracle`]: an independent dense density-matrix evolution path used to
//!   cross-check everything above.
//! * [`random`]: seeded generators for random states, unitaries and
//!   channels, shared by tests and the self-test suite.
//! * [`selftest`]: the runnable verification suite.

pub mod canon;
mod error;
pub mod fourlogic;
pub mod gatelib;
pub mod linalg;
pub mod liouville;
pub mod oracle;
pub mod pseudogate;
pub mod random;
pub mod selftest;
pub mod superop;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;

/// Dense complex matrix (Hilbert-space operators, Kraus operators, Choi matrices).
pub type CMat = nalgebra::DMatrix<C64>;

/// Dense complex vector.
pub type CVec = nalgebra::DVector<C64>;

/// Dense real matrix (gate matrices and their factors).
pub type RMat = nalgebra::DMatrix<f64>;

/// Dense real vector (Pauli coefficient vectors, translation parts).
pub type RVec = nalgebra::DVector<f64>;

/// Default tolerance for structural predicates (trace preservation,
/// unitality, orthogonality, Hermiticity checks).
pub const STRUCT_TOL: f64 = 1e-10;

/// Tolerance for exact algebraic round trips (basis expansions, affine
/// splits, index round trips).
pub const ROUND_TRIP_TOL: f64 = 1e-12;

/// Eigenvalue floor for positive-semidefiniteness checks: matrices with
/// minimum eigenvalue above this are accepted as positive.
pub const PSD_TOL: f64 = -1e-9;
