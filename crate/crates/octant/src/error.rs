use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("invalid wrapping numbers: {0}")]
    InvalidWrapping(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid rational map spec: {0}")]
    InvalidSpec(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("integration failed: {0}")]
    Integration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
