use thiserror::Error;

/// Failures surfaced by the library and the command line.
#[derive(Debug, Error)]
pub enum Error {
    /// An input outside the operation's domain (bad parity, element not in the set, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The request exceeds an exhaustive-search threshold.
    #[error("refused: {what} exceeds the limit {limit}; raise `{key}` in the config file to allow it")]
    Refused {
        what: String,
        limit: u64,
        key: &'static str,
    },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code used by the command line.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Refused { .. } => 3,
            Error::Domain(_) | Error::Parse { .. } => 2,
            Error::Io(_) | Error::Json(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
