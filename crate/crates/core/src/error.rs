use thiserror::Error;

/// Failures raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("ambient dimension {dim} exceeds the cap of {cap}")]
    SizeCap { dim: usize, cap: usize },
    #[error("numerical ambiguity: {0}")]
    Ambiguity(String),
    #[error("structural check failed: {0}")]
    Structural(String),
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("routes disagree: {0}")]
    Discrepancy(String),
    #[error("degenerate construction: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Ambiguity(_) => 3,
            Error::Verification(_) | Error::Discrepancy(_) | Error::Structural(_) => 2,
            _ => 1,
        }
    }
}
