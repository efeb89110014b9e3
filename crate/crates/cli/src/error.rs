use std::path::PathBuf;

use thiserror::Error;

/// Failures of a command, each tied to a fixed process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Solver(h2xr_core::Error),

    #[error("verification failed: {0}")]
    Verify(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Solver(_) | CliError::Io { .. } => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

/// Bad parameters are usage errors; everything else the solver reports is a failure to solve.
impl From<h2xr_core::Error> for CliError {
    fn from(e: h2xr_core::Error) -> Self {
        use h2xr_core::Error as E;
        match e {
            E::NonHyperbolic { .. } | E::InvalidInput(_) | E::InadmissibleClass { .. } | E::InvalidPoint { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Solver(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
