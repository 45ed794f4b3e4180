use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("unsupported weight: {0}")]
    UnsupportedWeight(String),
    #[error("degenerate set: {0}")]
    DegenerateSet(String),
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("endpoint singularity at {0}")]
    EndpointSingularity(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
