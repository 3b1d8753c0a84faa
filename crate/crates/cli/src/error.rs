use std::path::PathBuf;

use varietal::asc::AscError;
use varietal::formats::FormatError;
use varietal::subspaces::SubspaceError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Asc(#[from] AscError),
}

impl CliError {
    /// 0 ok, 1 input error, 2 grouping failure, 3 insufficient data, 4 points off
    /// the model.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Asc(e) => match e {
                AscError::GroupingFailure { .. } | AscError::EmptyVanishingSpace { .. } => 2,
                AscError::TooFewPoints { .. } | AscError::NoVanishingDegree { .. } => 3,
                AscError::PointsOffModel { .. } => 4,
                _ => 1,
            },
            _ => 1,
        }
    }
}
