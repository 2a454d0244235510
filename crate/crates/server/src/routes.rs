use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use thematic_core::report::{session_report, PaperView};
use thematic_core::session::Session;
use thematic_core::wheel::{build_multi_theme_wheel, build_single_theme_wheel, rank_papers};

use crate::api::*;
use crate::error::ApiError;
use crate::state::AppState;

type Shared = State<Arc<AppState>>;
type ApiResult<T> = Result<T, ApiError>;

pub fn v1_routes() -> Router<Arc<AppState>> {
    Router::new()
        .route("/themes", get(themes))
        .route("/themes/{id}", get(theme_detail))
        .route("/papers/{id}", get(paper_detail))
        .route("/papers/{id}/wheel", get(paper_wheel))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/selection", put(put_selection))
        .route("/sessions/{id}/excerpt-map", get(excerpt_map))
        .route("/sessions/{id}/strategy", put(put_strategy))
        .route("/sessions/{id}/reveal", post(reveal))
        .route("/sessions/{id}/export", get(export))
}

fn query<T>(q: Result<Query<T>, QueryRejection>) -> ApiResult<T> {
    q.map(|Query(v)| v).map_err(|e| ApiError::bad_request(e.body_text()))
}

fn body<T>(b: Result<Json<T>, JsonRejection>) -> ApiResult<T> {
    b.map(|Json(v)| v).map_err(|e| ApiError::bad_request(e.body_text()))
}

fn theme_id(raw: &str) -> ApiResult<usize> {
    raw.parse().map_err(|_| ApiError::new(StatusCode::NOT_FOUND, "unknown_theme", format!("no theme {raw:?}")))
}

/// Whether titles may be shown to the caller: only with a session that has
/// revealed them.
fn titles_revealed(state: &AppState, session: Option<&str>) -> ApiResult<bool> {
    match session {
        None => Ok(false),
        Some(id) => Ok(state.sessions().get(id)?.titles_revealed),
    }
}

fn papers_of(state: &AppState, session: &Session) -> ApiResult<Vec<PaperView>> {
    session
        .selection
        .iter()
        .map(|id| PaperView::new(&state.bundle, id, session.titles_revealed).map_err(ApiError::from))
        .collect()
}

fn session_view(state: &AppState, session: Session) -> ApiResult<SessionView> {
    let read_only = state.sessions().is_read_only(&session);
    Ok(SessionView { papers: papers_of(state, &session)?, session, read_only })
}

async fn themes(State(state): Shared) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], state.map_bytes.clone()).into_response()
}

async fn theme_detail(
    State(state): Shared,
    Path(id): Path<String>,
    q: Result<Query<SessionQuery>, QueryRejection>,
) -> ApiResult<Json<ThemeDetail>> {
    let q = query(q)?;
    let k = theme_id(&id)?;
    state.model.check_theme(k)?;
    let theme = state
        .map
        .theme(k)
        .cloned()
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "unknown_theme", format!("no theme {k}")))?;
    let revealed = titles_revealed(&state, q.session.as_deref())?;
    let papers = rank_papers(&state.papers, k, THEME_TOP_PAPERS)?
        .into_iter()
        .map(|r| {
            Ok(RankedPaper {
                paper: PaperView::new(&state.bundle, &r.doc_id, revealed)?,
                wheel: build_single_theme_wheel(&state.model, &r.doc_id, k, Some(&theme.color))?,
                relevance_percent: r.relevance_percent,
            })
        })
        .collect::<thematic_core::Result<Vec<_>>>()?;
    Ok(Json(ThemeDetail { theme, papers }))
}

async fn paper_detail(
    State(state): Shared,
    Path(id): Path<String>,
    q: Result<Query<SessionQuery>, QueryRejection>,
) -> ApiResult<Json<PaperDetail>> {
    let q = query(q)?;
    let dist = state.model.paper_distribution(&id)?;
    let revealed = titles_revealed(&state, q.session.as_deref())?;
    Ok(Json(PaperDetail {
        paper: PaperView::new(&state.bundle, &id, revealed)?,
        weights: dist.weights,
        wheel: build_multi_theme_wheel(&state.model, &id, &state.colors)?,
    }))
}

async fn paper_wheel(
    State(state): Shared,
    Path(id): Path<String>,
    q: Result<Query<WheelQuery>, QueryRejection>,
) -> ApiResult<Json<thematic_core::wheel::ThemeWheel>> {
    let q = query(q)?;
    let wheel = match (q.variant, q.theme) {
        (WheelKind::Multi, _) => build_multi_theme_wheel(&state.model, &id, &state.colors)?,
        (WheelKind::Single, Some(k)) => {
            state.model.check_theme(k)?;
            build_single_theme_wheel(&state.model, &id, k, state.colors[k].as_deref())?
        }
        (WheelKind::Single, None) => return Err(ApiError::bad_request("variant=single needs a theme parameter")),
    };
    Ok(Json(wheel))
}

async fn create_session(State(state): Shared) -> ApiResult<(StatusCode, Json<SessionView>)> {
    let session = state.sessions().create_session()?;
    Ok((StatusCode::CREATED, Json(session_view(&state, session)?)))
}

async fn get_session(State(state): Shared, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    let session = state.sessions().get(&id)?.clone();
    Ok(Json(session_view(&state, session)?))
}

async fn put_selection(
    State(state): Shared,
    Path(id): Path<String>,
    b: Result<Json<SelectionRequest>, JsonRejection>,
) -> ApiResult<Json<SessionView>> {
    let req = body(b)?;
    let session = state.sessions().update_selection(&id, req.doc_ids)?;
    state.forget_excerpts(&id);
    Ok(Json(session_view(&state, session)?))
}

async fn excerpt_map(State(state): Shared, Path(id): Path<String>) -> ApiResult<Json<ExcerptView>> {
    let session = state.sessions().get(&id)?.clone();
    let view = state.excerpt(&id, &session.selection)?;
    Ok(Json(ExcerptView {
        excerpt_map: view.excerpt.clone(),
        wheels: view.wheels.clone(),
        papers: papers_of(&state, &session)?,
    }))
}

async fn put_strategy(
    State(state): Shared,
    Path(id): Path<String>,
    b: Result<Json<StrategyRequest>, JsonRejection>,
) -> ApiResult<Json<SessionView>> {
    let req = body(b)?;
    let session = state.sessions().save_strategy(&id, req.entries)?;
    Ok(Json(session_view(&state, session)?))
}

async fn reveal(State(state): Shared, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    let session = state.sessions().reveal_titles(&id)?;
    Ok(Json(session_view(&state, session)?))
}

async fn export(State(state): Shared, Path(id): Path<String>) -> ApiResult<Json<thematic_core::report::SessionReport>> {
    let session = state.sessions().get(&id)?.clone();
    let report = session_report(&session, &state.bundle, &state.model, &state.model_hash, &state.excerpt_config)?;
    Ok(Json(report))
}
