use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Malformed { path: PathBuf, message: String },

    #[error("duplicate doc_id {0:?}")]
    DuplicateDocId(String),

    #[error("document {doc_id:?} is invalid: {reason}")]
    InvalidDocument { doc_id: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown doc_id {0:?}")]
    UnknownDoc(String),

    #[error("theme {theme_id} out of range (model has {topics} themes)")]
    UnknownTheme { theme_id: usize, topics: usize },

    #[error("unknown session {0:?}")]
    UnknownSession(String),

    #[error("selection rejected: {0}")]
    Selection(String),

    #[error("reading strategy rejected: {0}")]
    Strategy(String),

    #[error("session {0:?} was built against a different model and is read-only")]
    ReadOnlySession(String),

    #[error("artifact mismatch: {0}")]
    HashMismatch(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn malformed(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Malformed {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Short machine-readable code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io_error",
            Error::Malformed { .. } => "malformed_input",
            Error::DuplicateDocId(_) => "duplicate_doc_id",
            Error::InvalidDocument { .. } => "invalid_document",
            Error::Config(_) => "invalid_config",
            Error::UnknownDoc(_) => "unknown_doc",
            Error::UnknownTheme { .. } => "unknown_theme",
            Error::UnknownSession(_) => "unknown_session",
            Error::Selection(_) => "invalid_selection",
            Error::Strategy(_) => "invalid_strategy",
            Error::ReadOnlySession(_) => "read_only_session",
            Error::HashMismatch(_) => "artifact_mismatch",
        }
    }
}
