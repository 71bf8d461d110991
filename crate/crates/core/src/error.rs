//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A scenario or calibration file is malformed or inconsistent.
    /// Multi-problem validation reports join all findings into one message.
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was called with arguments that violate its contract.
    #[error("validation error: {0}")]
    Validation(String),

    /// A trace file could not be parsed; `line` is 1-based.
    #[error("{path}:{line}: {message}")]
    TraceParse {
        path: String,
        line: usize,
        message: String,
    },

    /// The storage target cannot serve requests (e.g. a failed array).
    #[error("storage unavailable: {0}")]
    Unavailable(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad configuration or inputs, as opposed to
    /// failures that arise while a valid scenario is running. The CLI maps
    /// the two classes to distinct exit codes.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::Validation(_) | Error::TraceParse { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
