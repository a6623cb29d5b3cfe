use thiserror::Error;

/// Errors raised by the schedulers and the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error("no schedule reverses {m} steps within {units} units")]
    Infeasible { m: usize, units: usize },
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error("checkpoint ({step}, {kind}) is not on an optimal path: {reason}")]
    InvalidState { step: i64, kind: String, reason: String },
    #[error(transparent)]
    Validation(#[from] crate::executor::ValidationError),
}

pub type Result<T> = std::result::Result<T, Error>;
