use std::path::Path;

use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ehrlab::Error),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{0}")]
    Parse(String),

    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Io { .. } => "E_IO",
            CliError::Parse(_) => "E_PARSE",
            CliError::Precondition(_) => "E_PRECONDITION",
        }
    }
}
