use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid rank {rank} for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("memory budget exceeded: need {needed} bytes, cap is {cap} bytes")]
    ResourceLimit { needed: u64, cap: u64 },
    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
