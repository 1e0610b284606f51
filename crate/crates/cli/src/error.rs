use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad scenario content, reported with the offending field path.
    #[error("{path}: {message}")]
    Validation { path: String, message: String },
    #[error("cannot parse {file}: {message}")]
    Parse { file: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    /// A result that should be impossible for valid input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn validation(path: impl Into<String>, message: impl ToString) -> Self {
        CliError::Validation {
            path: path.into(),
            message: message.to_string(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 validation, 2 I/O, 3 internal invariant.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation { .. } | CliError::Parse { .. } => 1,
            CliError::Io { .. } => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
