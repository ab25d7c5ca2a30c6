use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("invalid Bloch vector: length {0} exceeds 1")]
    InvalidBloch(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("fixed point is not diagonal in the computational basis (max off-diagonal {0:e})")]
    NonDiagonalFixedPoint(f64),

    #[error("negative time t = {0}")]
    NegativeTime(f64),

    #[error("singular schedule at t = {t} (p = {p:e})")]
    SingularSchedule { t: f64, p: f64 },

    #[error("schedule vanishes inside the time grid at t = {0:?}")]
    SingularGrid(Vec<f64>),

    #[error("map is not invertible (condition number {0:e})")]
    NonInvertibleMap(f64),

    #[error("non-finite value produced at t = {0}")]
    NonFinite(f64),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
