use thiserror::Error;

/// Errors raised by the library. Each variant names the violated precondition.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("operation requires subsystem dimensions but none were attached")]
    MissingDims,

    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("operation requires at least two subsystems, got {0}")]
    SinglePartition(usize),

    #[error("matrix is not symmetric (max |A - A^T| = {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not Hermitian (max |H - H^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max |U U^dagger - I| = {0:e})")]
    NotUnitary(f64),

    #[error("zero vector has no eigenvalue or concurrence")]
    ZeroVector,

    #[error("frame is incomplete (max |sum |v><v| - I| = {0:e})")]
    IncompleteFrame(f64),

    #[error("target spectrum is not equivalent to the magic-basis spectrum")]
    InequivalentSpectrum,

    #[error("orthogonal matrix has determinant {0:.6}, expected +1")]
    NegativeDeterminant(f64),

    #[error("directions do not form a regular tetrahedron (max |n_j.n_k + 1/3| = {0:e})")]
    NotTetrahedral(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
