use std::path::PathBuf;

use omnivocal_core::Error;

/// Failures surfaced by the command-line tools, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed files, flags or literals.
    #[error("{0}")]
    Input(String),
    /// Well-formed input outside what a command supports.
    #[error("{0}")]
    Domain(String),
    /// A cross-check between independent computations failed.
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Domain(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSubset(s)
            | Error::InvalidPartition(s)
            | Error::InvalidSource(s)
            | Error::InvalidGraph(s) => CliError::Input(s),
            Error::SizeLimit(s) | Error::PreconditionViolation(s) => CliError::Domain(s),
            Error::InternalInconsistency(s) => CliError::Internal(s),
        }
    }
}
