use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameters out of range: {0}")]
    Param(String),
    #[error("normalization required: (s,p,n) = ({s},{p},{n}) does not satisfy 2p <= n <= 2s")]
    NormalizationRequired { s: usize, p: usize, n: usize },
    #[error("rank error: expected rank {expected}, found {found}")]
    Rank { expected: usize, found: usize },
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("outside evaluation domain: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
