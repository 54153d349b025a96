//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A configurable cap (orbit size, iteration count, ...) was exceeded.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    /// A numerical routine failed to reach its tolerance.
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    /// The operation is not available for this input (e.g. a non-regular weight).
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

/// Convenience alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
