use thiserror::Error;

/// Errors raised by group, field and simulator constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Inputs that do not fit the structure they are used with.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("index {index} out of range for size {size}")]
    Range { index: usize, size: usize },

    /// Exhaustive or dense work was requested beyond the configured cap.
    #[error("order {order} exceeds dense cap {cap}")]
    CapExceeded { order: usize, cap: usize },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    /// A mathematical precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A state or result violated an invariant that should hold exactly.
    #[error("integrity error: {0}")]
    Integrity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}
