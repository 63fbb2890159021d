use std::path::PathBuf;

use thiserror::Error;

/// Failures of the command-line layer, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Core(#[from] bridgesift_core::Error),
}

impl CliError {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config { key: key.into(), message: message.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for config and usage problems, 3 for I/O, 4 for failed verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Usage(_) | CliError::Format { .. } => 2,
            CliError::Io { .. } => 3,
            CliError::Verification(_) => 4,
            CliError::Core(e) => core_exit_code(e),
        }
    }
}

fn core_exit_code(e: &bridgesift_core::Error) -> i32 {
    use bridgesift_core::Error as E;
    match e {
        E::Domain(_) | E::LengthMismatch { .. } => 2,
        E::Quadrature { .. } => 4,
        E::Replicate { source, .. } => core_exit_code(source),
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
