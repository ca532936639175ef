use std::path::PathBuf;

use thiserror::Error;

use crate::pgm::PgmError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Dimensions or counts that violate an operation's preconditions.
    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("degenerate strip: {width}x{height} (need width >= 2 and height >= 4)")]
    DegenerateStrip { width: usize, height: usize },

    #[error("sheet too fragmented: more than {max} components (bad scan?)")]
    SheetTooFragmented { max: usize },

    #[error("instance too large for exhaustive search: {strips} strips (limit {limit})")]
    TooLarge { strips: usize, limit: usize },

    /// Reconstruction and ground truth disagree about which strips exist.
    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("pgm: {0}")]
    Pgm(#[from] PgmError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    /// A post-condition of the library itself failed.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 2,
            _ => 1,
        }
    }
}
