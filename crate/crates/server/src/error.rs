use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use thiserror::Error;

/// Failure to bring the service up.
#[derive(Debug, Error)]
pub enum StartupError {
    #[error("invalid server configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] thematic_core::Error),
    #[error("corpus has {papers} papers, more than the supported {limit}")]
    TooManyPapers { papers: usize, limit: usize },
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: String,
        #[source]
        source: std::io::Error,
    },
    #[error("server stopped: {0}")]
    Serve(#[source] std::io::Error),
}

/// An error response: `{"error": {"code": ..., "message": ...}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self { status, code, message: message.into() }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", message)
    }
}

impl From<thematic_core::Error> for ApiError {
    fn from(e: thematic_core::Error) -> Self {
        use thematic_core::Error as E;
        let status = match &e {
            E::UnknownDoc(_) | E::UnknownTheme { .. } | E::UnknownSession(_) => StatusCode::NOT_FOUND,
            E::Selection(_) | E::Strategy(_) | E::Config(_) => StatusCode::UNPROCESSABLE_ENTITY,
            E::ReadOnlySession(_) => StatusCode::CONFLICT,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        Self::new(status, e.code(), e.to_string())
    }
}

#[derive(Serialize)]
struct Body<'a> {
    error: Detail<'a>,
}

#[derive(Serialize)]
struct Detail<'a> {
    code: &'a str,
    message: &'a str,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Body { error: Detail { code: self.code, message: &self.message } };
        (self.status, Json(body)).into_response()
    }
}
