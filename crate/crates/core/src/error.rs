use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{message} at line {line}")]
    Parse { line: usize, message: String },

    #[error("cannot serialize pair {index}: {message}")]
    Serialize { index: usize, message: String },

    #[error("invalid clue policy: {0}")]
    InvalidPolicy(String),

    #[error("invalid synthetic config: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Jaccard overlap of two empty character sets.
    #[error("character overlap is undefined for two empty strings")]
    UndefinedOverlap,

    /// Spearman correlation with a constant input.
    #[error("rank correlation is undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("alpha is undefined without CSC samples")]
    NoCscSamples,

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("evaluation index set is empty")]
    EmptyIndexSet,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Write(#[from] std::io::Error),
}
