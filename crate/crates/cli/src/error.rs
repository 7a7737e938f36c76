use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, bad config or inconsistent arguments: exit status 2.
    #[error("usage: {0}")]
    Usage(String),
    /// A verification ran and did not pass: exit status 1.
    #[error("verification failed: {0}")]
    Failed(String),
    #[error(transparent)]
    Core(#[from] halfspace_core::Error),
    #[error(transparent)]
    Spectral(#[from] halfspace_spectral::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
