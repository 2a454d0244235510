//! HTTP API over a trained theme model: the theme map, theme details with
//! ranked papers, theme wheels, and reading sessions with excerpt maps.
//!
//! All routes live under `/v1`. Errors are JSON objects of the form
//! `{"error": {"code": "...", "message": "..."}}`.

pub mod api;
pub mod config;
pub mod error;
mod routes;
pub mod state;

use std::sync::Arc;

use axum::http::{HeaderValue, Method};
use axum::Router;
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

pub use config::ApiConfig;
pub use error::{ApiError, StartupError};
pub use state::AppState;

async fn not_found() -> ApiError {
    ApiError::not_found("no such endpoint")
}

async fn method_not_allowed() -> ApiError {
    ApiError::new(axum::http::StatusCode::METHOD_NOT_ALLOWED, "method_not_allowed", "method not allowed here")
}

/// The full application: `/v1` routes, CORS, and optional static UI assets.
pub fn app(state: Arc<AppState>, config: &ApiConfig) -> Result<Router, StartupError> {
    let v1 = routes::v1_routes().fallback(not_found).method_not_allowed_fallback(method_not_allowed);
    let mut router = Router::new().nest("/v1", v1).with_state(state);
    router = match &config.static_dir {
        Some(dir) => router.fallback_service(ServeDir::new(dir)),
        None => router.fallback(not_found),
    };
    if !config.cors_origins.is_empty() {
        let origins = config
            .cors_origins
            .iter()
            .map(|o| HeaderValue::from_str(o).map_err(|_| StartupError::Config(format!("bad CORS origin {o:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        router = router.layer(
            CorsLayer::new()
                .allow_origin(origins)
                .allow_methods([Method::GET, Method::POST, Method::PUT])
                .allow_headers([axum::http::header::CONTENT_TYPE]),
        );
    }
    Ok(router)
}

/// Loads the artifacts named in `config` and serves until interrupted.
/// `on_ready` receives the bound address.
pub async fn serve(config: ApiConfig, on_ready: impl FnOnce(std::net::SocketAddr)) -> Result<(), StartupError> {
    let state = Arc::new(AppState::load(&config)?);
    let router = app(state, &config)?;
    let listener = tokio::net::TcpListener::bind(&config.bind)
        .await
        .map_err(|source| StartupError::Bind { addr: config.bind.clone(), source })?;
    let addr = listener.local_addr().map_err(StartupError::Serve)?;
    on_ready(addr);
    axum::serve(listener, router)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(StartupError::Serve)
}
