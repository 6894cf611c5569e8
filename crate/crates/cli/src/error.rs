use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Lib(#[from] blockade::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Parse { .. } => 2,
            CliError::Lib(blockade::Error::Input(_)) => 2,
            CliError::Lib(blockade::Error::SizeCap { .. }) => 3,
            CliError::Lib(blockade::Error::Invariant(_)) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
