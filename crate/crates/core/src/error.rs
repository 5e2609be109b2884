use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("event `{event}` is controllable in one automaton and uncontrollable in another")]
    ControllabilityConflict { event: String },

    #[error("unknown event `{0}`")]
    UnknownEvent(String),

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("subnet {subnet} is unsynthesizable: {reason}")]
    Unsynthesizable { subnet: String, reason: String },

    #[error("planning failed: {0}")]
    Planning(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
