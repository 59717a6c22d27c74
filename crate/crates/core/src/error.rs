use thiserror::Error;

/// Errors raised by the library. Every operation is exact, so these signal
/// invalid input or a broken internal identity, never a loss of precision.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0} (must be between 1 and 4)")]
    UnsupportedDimension(usize),
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("value exceeds the range of the machine-integer enumeration kernel")]
    Overflow,
    #[error("singular input: {0}")]
    Singular(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal identity failed: {0}")]
    Inconsistent(String),
    #[error("data file: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
