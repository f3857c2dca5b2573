//! Local HTTP API. Bodies use the same JSON documents as the files.

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use quasar_core::assessment::AssessmentSnapshot;
use quasar_core::optimizer::ProblemDocument;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use crate::clock::Clock;
use crate::document::from_json;
use crate::error::Error;
use crate::ops::{self, ClassifyRequest};
use crate::projection::ProjectionRequest;
use crate::report::score_snapshot;
use crate::store::SnapshotStore;

pub struct AppState {
    pub store: SnapshotStore,
    pub clock: Arc<dyn Clock>,
}

struct ApiError(Error);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self.0 {
            Error::Input { .. } => StatusCode::BAD_REQUEST,
            Error::NotFound(_) => StatusCode::NOT_FOUND,
            Error::Conflict(_) => StatusCode::CONFLICT,
            Error::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let message = match &self.0 {
            Error::Input { message, .. } => message.clone(),
            other => other.to_string(),
        };
        (status, Json(json!({ "error": message, "field": self.0.field() }))).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, Error> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::input("", format!("body is not UTF-8: {e}")))?;
    from_json(text)
}

fn to_value<T: serde::Serialize>(v: &T) -> Json<Value> {
    Json(serde_json::to_value(v).expect("responses serialize"))
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

async fn list_snapshots(State(state): State<Arc<AppState>>) -> ApiResult {
    Ok(to_value(&state.store.list()?))
}

async fn get_snapshot(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    Ok(to_value(&state.store.get(&id)?))
}

async fn add_snapshot(State(state): State<Arc<AppState>>, bytes: Bytes) -> Result<Response, ApiError> {
    let snapshot: AssessmentSnapshot = body(&bytes)?;
    let stored = state.store.add(snapshot, state.clock.as_ref())?;
    Ok((StatusCode::CREATED, Json(json!({ "id": stored.id }))).into_response())
}

async fn score(State(state): State<Arc<AppState>>, bytes: Bytes) -> ApiResult {
    let snapshot: AssessmentSnapshot = body(&bytes)?;
    Ok(to_value(&score_snapshot(&snapshot, state.clock.now())?))
}

async fn project(bytes: Bytes) -> ApiResult {
    let request: ProjectionRequest = body(&bytes)?;
    Ok(to_value(&request.run()?))
}

async fn optimize(bytes: Bytes) -> ApiResult {
    let doc: ProblemDocument = body(&bytes)?;
    let solution = tokio::task::spawn_blocking(move || ops::optimize(&doc))
        .await
        .map_err(Error::internal)??;
    Ok(to_value(&solution))
}

async fn classify(State(state): State<Arc<AppState>>, bytes: Bytes) -> ApiResult {
    let (assets, as_of) = match body::<ClassifyRequest>(&bytes)? {
        ClassifyRequest::Assets(a) => (a, state.clock.now()),
        ClassifyRequest::Dated { assets, as_of } => (assets, as_of),
    };
    Ok(to_value(&ops::classify_inventory(&assets, as_of)?))
}

/// All `/api` routes, plus static files from `ui_dir` for every other path.
pub fn router(state: Arc<AppState>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/snapshots", get(list_snapshots).post(add_snapshot))
        .route("/api/snapshots/:id", get(get_snapshot))
        .route("/api/score", post(score))
        .route("/api/project", post(project))
        .route("/api/optimize", post(optimize))
        .route("/api/inventory/classify", post(classify))
        .with_state(state);
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Serves until the process receives Ctrl-C.
pub async fn serve(listener: tokio::net::TcpListener, app: Router) -> std::io::Result<()> {
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
