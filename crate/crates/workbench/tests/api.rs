use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use quasar_workbench::api::{router, AppState};
use quasar_workbench::store::SnapshotStore;
use quasar_workbench::FixedClock;
use serde_json::Value;
use tower::ServiceExt;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

fn app(store: &std::path::Path, ui: Option<PathBuf>) -> Router {
    let state = AppState {
        store: SnapshotStore::open(store).unwrap(),
        clock: Arc::new(FixedClock("2026-01-01T00:00:00Z".parse().unwrap())),
    };
    router(Arc::new(state), ui)
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<String>) -> (StatusCode, Value) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, Body::from))
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    let value =
        serde_json::from_slice(&bytes).unwrap_or(Value::String(String::from_utf8_lossy(&bytes).into()));
    (status, value)
}

#[tokio::test]
async fn health() {
    let dir = tempfile::tempdir().unwrap();
    let (status, body) = call(&app(dir.path(), None), "GET", "/api/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, serde_json::json!({ "status": "ok" }));
}

#[tokio::test]
async fn score_basic_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let (status, body) = call(
        &app(dir.path(), None),
        "POST",
        "/api/score",
        Some(fixture("snapshot-basic.json")),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert!((body["pqr"]["literal"].as_f64().unwrap() - 1.44).abs() <= 1e-12);
    assert!((body["rs"].as_f64().unwrap() - 0.5).abs() <= 1e-12);
}

#[tokio::test]
async fn bad_weights_are_400_with_field() {
    let dir = tempfile::tempdir().unwrap();
    let text = fixture("snapshot-basic.json")
        .replace("\"domainWeights\": [0.4, 0.6]", "\"domainWeights\": [0.4, 0.5]");
    let (status, body) = call(&app(dir.path(), None), "POST", "/api/score", Some(text)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["field"], "domainWeights");
    assert!(body["error"].as_str().unwrap().contains("0.9"));
}

#[tokio::test]
async fn malformed_documents_are_400() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path(), None);
    let (status, body) = call(&app, "POST", "/api/score", Some("{not json".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["error"].is_string());
    let (status, body) = call(&app, "POST", "/api/score", Some(r#"{"domainScores":{"technical":[],"security":[],"operational":[]},"domainWeights":[1],"colour":1}"#.into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["error"].as_str().unwrap().contains("colour"));
}

#[tokio::test]
async fn snapshot_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path(), None);
    let (status, _) = call(&app, "GET", "/api/snapshots/nonexistent", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (status, body) = call(
        &app,
        "POST",
        "/api/snapshots",
        Some(fixture("snapshot-no-risk.json")),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["id"], "no-risk");
    let (status, _) = call(
        &app,
        "POST",
        "/api/snapshots",
        Some(fixture("snapshot-no-risk.json")),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);

    let (_, index) = call(&app, "GET", "/api/snapshots", None).await;
    assert_eq!(index.as_array().unwrap().len(), 1);
    assert_eq!(index[0]["label"], "No risk matrix");

    let (status, stored) = call(&app, "GET", "/api/snapshots/no-risk", None).await;
    assert_eq!(status, StatusCode::OK);
    let original: Value = serde_json::from_str(&fixture("snapshot-no-risk.json")).unwrap();
    assert_eq!(stored, original);
}

#[tokio::test]
async fn project_optimize_classify() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path(), None);
    let (status, bundle) = call(
        &app,
        "POST",
        "/api/project",
        Some(r#"{"alpha":0.2,"beta":0.9,"lambda":0.5,"horizonEnd":2,"step":1}"#.into()),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(bundle["P"][0], 0.2);
    assert!((bundle["P"][2].as_f64().unwrap() - 0.642485).abs() <= 1e-6);

    let (status, body) = call(
        &app,
        "POST",
        "/api/project",
        Some(r#"{"alpha":1.2,"beta":0.9,"lambda":0.5,"horizonEnd":2}"#.into()),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["field"], "alpha");

    let (status, solution) = call(
        &app,
        "POST",
        "/api/optimize",
        Some(fixture("problems/pinned.json")),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert!((solution["assignment"][0]["value"].as_f64().unwrap() - 0.25).abs() <= 1e-4);

    let (status, body) = call(
        &app,
        "POST",
        "/api/optimize",
        Some(r#"{"variables":[{"name":"x","lo":0,"hi":1}],"objectives":["x + q"]}"#.into()),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["field"], "objectives[0]");

    let (status, body) = call(
        &app,
        "POST",
        "/api/inventory/classify",
        Some(fixture("inventory-mixed.json")),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["ranking"][0], "sig-code");
    assert_eq!(body["matrix"]["shares"][1][1]["denominator"], 12);
}

#[tokio::test]
async fn serves_ui_files_outside_api() {
    let dir = tempfile::tempdir().unwrap();
    let ui = tempfile::tempdir().unwrap();
    std::fs::write(ui.path().join("index.html"), "<h1>ui</h1>").unwrap();
    let app = app(dir.path(), Some(ui.path().to_path_buf()));
    let (status, body) = call(&app, "GET", "/index.html", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, Value::String("<h1>ui</h1>".into()));
    let (status, _) = call(&app, "GET", "/api/health", None).await;
    assert_eq!(status, StatusCode::OK);
}
