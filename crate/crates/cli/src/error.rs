use std::path::PathBuf;
use std::process::ExitCode;

use collatz_matrix::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed checkpoint: {reason}")]
    Checkpoint { path: PathBuf, reason: String },
    #[error(
        "{path}: checkpoint belongs to a different scan (fingerprint {found}, expected {expected}); \
         delete it or rerun with the original --from/--to/--block"
    )]
    FingerprintMismatch {
        path: PathBuf,
        found: String,
        expected: String,
    },
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VIOLATION: u8 = 2;
pub const EXIT_IO: u8 = 3;

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.exit_status())
    }

    pub fn exit_status(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::FingerprintMismatch { .. } => EXIT_USAGE,
            CliError::Core(e) => match e {
                CoreError::FactorizationTimeout { .. } | CoreError::Overflow { .. } => EXIT_IO,
                CoreError::EquivalenceBroken(_) => EXIT_VIOLATION,
                _ => EXIT_USAGE,
            },
            CliError::Io { .. } | CliError::Checkpoint { .. } | CliError::Output(_) => EXIT_IO,
        }
    }
}
