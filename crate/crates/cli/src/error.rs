use std::path::PathBuf;

use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid job spec: {0}")]
    Schema(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Solver(#[from] atem_core::Error),
    #[error("{failed} of {total} reference entries outside tolerance")]
    TableMismatch { failed: usize, total: usize },
    #[error("requested state {state} but only {available} eigenvalues were found")]
    StateOutOfRange { state: usize, available: usize },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for anything wrong with the request itself, 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        use atem_core::Error as E;
        match self {
            CliError::Schema(_) | CliError::Usage(_) => 2,
            CliError::Solver(e) => match e {
                E::PrecisionTooLow { .. }
                | E::Parse { .. }
                | E::NonPositiveScale(_)
                | E::InvalidAnsatz(_)
                | E::InvalidProblem(_)
                | E::InvalidConfig(_)
                | E::NotSymmetric
                | E::DepthOutOfRange { .. }
                | E::OddDepth(_) => 2,
                _ => 1,
            },
            CliError::Io { .. } | CliError::TableMismatch { .. } | CliError::StateOutOfRange { .. } => 1,
        }
    }
}
