use thiserror::Error;

/// Errors raised by the exact core.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("zero pivot at step {0}")]
    Factorization(usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("graph error: {0}")]
    Graph(String),
    #[error("enumeration bound exceeded: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
