use std::io;

use thiserror::Error;

/// Errors produced anywhere in the workbench.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: u64, len: u64 },

    /// The operation needs data beyond what the supplied table covers.
    #[error("table capability exceeded: {0}")]
    Capability(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("construction failure: {0}")]
    ConstructionFailure(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
