//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the model, oracle, and workbench layers.
///
/// The CLI maps these onto process exit codes: invalid input -> 2,
/// numerical failure -> 3, I/O -> 4.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameter or argument validation failure.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// A frequency grid or data series failed a structural precondition.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    /// A linear system was singular where a solution was required.
    #[error("singular system: {0}")]
    Singular(String),
    /// An operation required a stable drift system and got an unstable one.
    #[error("unstable system: {0}")]
    Unstable(String),
    /// Time integration overflowed or produced non-finite state.
    #[error("integration diverged: {0}")]
    Diverged(String),
    /// File I/O failure; the offending path is part of the message.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
