//! HTTP front end for [`SessionManager`].
//!
//! `POST /sessions`, `GET /sessions/{id}`, `POST /sessions/{id}/actions`,
//! `GET /sessions/{id}/transcript`. Bodies are JSON; errors come back as
//! `{"v": 1, "error": <code>, "message": <text>}`.

use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;

use ramsey_core::session::{
    ActionRequest, CreateRequest, PublicState, SessionError, SessionManager, PROTOCOL_VERSION,
};

pub struct ApiError(SessionError);

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        ApiError(e)
    }
}

pub fn status_for(e: &SessionError) -> StatusCode {
    match e {
        SessionError::UnknownPolicy(_)
        | SessionError::InvalidConfig(_)
        | SessionError::BadRequest(_) => StatusCode::BAD_REQUEST,
        SessionError::UnknownSession(_) => StatusCode::NOT_FOUND,
        SessionError::WrongTurn(_) | SessionError::SessionFinished | SessionError::NotFinished => {
            StatusCode::CONFLICT
        }
        SessionError::IllegalEdge(_) => StatusCode::UNPROCESSABLE_ENTITY,
        SessionError::Engine(_) => StatusCode::INTERNAL_SERVER_ERROR,
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "v": PROTOCOL_VERSION, "error": self.0.code(), "message": self.0.to_string() });
        (status_for(&self.0), Json(body)).into_response()
    }
}

type Manager = Arc<SessionManager>;

fn parse_body<T: serde::de::DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError(SessionError::BadRequest(e.to_string())))
}

/// Session work can run a solver, so it goes to the blocking pool.
async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, SessionError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError(SessionError::Engine(e.to_string())))?
        .map_err(ApiError)
}

async fn create(State(m): State<Manager>, body: Bytes) -> Result<(StatusCode, Json<PublicState>), ApiError> {
    let req: CreateRequest = parse_body(&body)?;
    let state = blocking(move || m.create(&req)).await?;
    Ok((StatusCode::CREATED, Json(state)))
}

async fn show(State(m): State<Manager>, Path(id): Path<String>) -> Result<Json<PublicState>, ApiError> {
    Ok(Json(m.get(&id)?))
}

async fn act(
    State(m): State<Manager>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<PublicState>, ApiError> {
    let req: ActionRequest = parse_body(&body)?;
    Ok(Json(blocking(move || m.submit(&id, &req)).await?))
}

async fn transcript(State(m): State<Manager>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let t = m.transcript(&id)?;
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], t.to_text()).into_response())
}

pub fn router(manager: Manager) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/actions", post(act))
        .route("/sessions/{id}/transcript", get(transcript))
        .with_state(manager)
}

/// Serves until the process is stopped, purging idle sessions once a minute.
pub async fn serve(addr: &str, manager: Manager) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    let purger = manager.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            purger.purge(Instant::now());
        }
    });
    axum::serve(listener, router(manager)).await
}
