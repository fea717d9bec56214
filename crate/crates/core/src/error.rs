use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke a documented precondition (length mismatch, out-of-range
    /// parameter, empty input set, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A problem could not be evaluated at the given point.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// A generator specification or algorithm configuration is inconsistent.
    #[error("construction error: {0}")]
    Construction(String),

    /// The reference-front oracle found no feasible nondominated point.
    #[error("empty reference front for {0}")]
    EmptyFront(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed file {path}: {reason}")]
    Parse { path: PathBuf, reason: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
