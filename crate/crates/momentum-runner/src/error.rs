use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("config {file}:{line}: {message}")]
    Config { file: String, line: usize, message: String },

    #[error("config {file}: {message}")]
    ConfigFile { file: String, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Lab(#[from] momentum_lab::Error),
}

impl RunnerError {
    /// CLI exit code: 2 for usage/config problems, 3 for numerical failures.
    /// (Exit code 1 is reserved for verifications that ran and failed.)
    pub fn exit_code(&self) -> i32 {
        match self {
            RunnerError::Lab(momentum_lab::Error::NumericalFailure { .. })
            | RunnerError::Lab(momentum_lab::Error::IntegrationDiverged { .. }) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, RunnerError>;
