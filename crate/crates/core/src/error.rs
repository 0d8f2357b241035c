use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of the function (n = 0, v(1), mismatched supports...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Exact result does not fit in 64 bits.
    #[error("range error: {0}")]
    Range(String),
    #[error("resource error: {what} needs {needed} bytes, budget is {budget} bytes")]
    Resource {
        what: String,
        needed: u64,
        budget: u64,
    },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("incompatible checkpoint format version {found} (expected {expected})")]
    Incompatible { found: u64, expected: u64 },
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
}
