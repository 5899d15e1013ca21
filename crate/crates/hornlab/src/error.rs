use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Malformed input value (non-monotone sequence, out-of-range index, ...).
    #[error("validation error: {0}")]
    Validation(String),
    /// Structurally valid input outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Input exceeds a hard resource limit of the implementation.
    #[error("resource limit: {0}")]
    Resource(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
