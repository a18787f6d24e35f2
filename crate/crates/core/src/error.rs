use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input larger than the guarded desk-scale limits.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// An exactness check failed (inexact division, unexpected degree, ...).
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
