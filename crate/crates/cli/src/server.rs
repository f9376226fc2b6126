//! HTTP API. Request and response bodies use the same JSON as files, and
//! responses are canonical JSON so that they match CLI output byte for byte.

use std::sync::Arc;

use axum::body::Body;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::Router;
use ictimpact_core::uncertainty::{default_workers, DEFAULT_SAMPLES};
use ictimpact_core::workbench::{
    from_json_text, nest_issues, parse_scenario, run_assessment, run_audit, run_baseline,
    run_sensitivity, serialize_document, to_canonical_json, Issue, IssueCode, ParseMode,
    RunOptions, SensitivityMode, WorkbenchError, SCENARIO_SCHEMA, SCHEMA_VERSION,
    SUPPORTED_VERSIONS,
};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use tower_http::cors::CorsLayer;
use tower_http::trace::TraceLayer;

use crate::store::ScenarioStore;
use crate::SeedPolicy;

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<ScenarioStore>,
    pub seeds: SeedPolicy,
    pub workers: usize,
}

impl AppState {
    pub fn new(store_capacity: usize, seeds: SeedPolicy) -> Self {
        AppState {
            store: Arc::new(ScenarioStore::new(store_capacity)),
            seeds,
            workers: default_workers(),
        }
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/v1/assess", post(assess))
        .route("/v1/sensitivity", post(sensitivity))
        .route("/v1/audit", post(audit))
        .route("/v1/baseline", post(baseline))
        .route("/v1/schema", get(schema))
        .route("/v1/scenarios/{id}", put(put_scenario).get(get_scenario))
        .layer(CorsLayer::permissive())
        .layer(TraceLayer::new_for_http())
        .with_state(state)
}

/// Binds `addr` and serves until interrupted.
pub async fn serve(addr: &str, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

pub struct ApiError {
    status: StatusCode,
    error: WorkbenchError,
}

impl ApiError {
    fn new(status: StatusCode, code: IssueCode, path: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            error: WorkbenchError::single(Issue::new(code, path, message)),
        }
    }
}

impl From<WorkbenchError> for ApiError {
    fn from(error: WorkbenchError) -> Self {
        let unprocessable = error
            .issues
            .iter()
            .all(|i| matches!(i.code, IssueCode::Validation | IssueCode::Computation));
        let status = if unprocessable {
            StatusCode::UNPROCESSABLE_ENTITY
        } else {
            StatusCode::BAD_REQUEST
        };
        ApiError { status, error }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    errors: &'a [Issue],
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        json_response(self.status, to_canonical_json(&ErrorBody { errors: &self.error.issues }))
    }
}

fn json_response(status: StatusCode, body: String) -> Response {
    Response::builder()
        .status(status)
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from(body))
        .expect("static response parts")
}

fn ok_json<T: Serialize>(value: &T) -> Response {
    json_response(StatusCode::OK, to_canonical_json(value))
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, IssueCode::Computation, "", e.to_string())
    })?
}

fn mode(lenient: Option<bool>) -> ParseMode {
    if lenient.unwrap_or(false) {
        ParseMode::Lenient
    } else {
        ParseMode::Strict
    }
}

#[derive(Deserialize)]
struct AssessQuery {
    seed: Option<u64>,
    lenient: Option<bool>,
}

async fn assess(
    State(state): State<AppState>,
    Query(q): Query<AssessQuery>,
    body: String,
) -> Result<Response, ApiError> {
    let (seed, _) = state.seeds.resolve(q.seed);
    let report = blocking(move || {
        let doc = parse_scenario(&body, mode(q.lenient))?;
        let options = RunOptions {
            workers: state.workers,
            ..RunOptions::new(seed)
        };
        Ok(run_assessment(&doc, &options)?)
    })
    .await?;
    Ok(ok_json(&report))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SensitivityRequest {
    document: Box<RawValue>,
    mode: SensitivityMode,
    #[serde(default)]
    samples: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
}

async fn sensitivity(State(state): State<AppState>, body: String) -> Result<Response, ApiError> {
    let req: SensitivityRequest = from_json_text(&body)?;
    let (seed, _) = state.seeds.resolve(req.seed);
    let report = blocking(move || {
        let doc = parse_scenario(req.document.get(), ParseMode::Strict)
            .map_err(|e| nest_issues(e, "document"))?;
        Ok(run_sensitivity(&doc, req.mode, req.samples.unwrap_or(DEFAULT_SAMPLES), seed)?)
    })
    .await?;
    Ok(ok_json(&report))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BaselineRequest {
    document: Box<RawValue>,
    horizon: u32,
}

async fn baseline(body: String) -> Result<Response, ApiError> {
    let req: BaselineRequest = from_json_text(&body)?;
    let doc = parse_scenario(req.document.get(), ParseMode::Strict)
        .map_err(|e| nest_issues(e, "document"))?;
    Ok(ok_json(&run_baseline(&doc, req.horizon)?))
}

async fn audit(body: String) -> Result<Response, ApiError> {
    let doc = parse_scenario(&body, ParseMode::Strict)?;
    Ok(ok_json(&run_audit(&doc)?))
}

#[derive(Serialize)]
struct SchemaResponse {
    schema_version: u32,
    supported_versions: &'static [u32],
    schema: serde_json::Value,
}

async fn schema() -> Response {
    ok_json(&SchemaResponse {
        schema_version: SCHEMA_VERSION,
        supported_versions: SUPPORTED_VERSIONS,
        schema: serde_json::from_str(SCENARIO_SCHEMA).expect("bundled schema is JSON"),
    })
}

#[derive(Deserialize)]
struct PutQuery {
    lenient: Option<bool>,
}

async fn put_scenario(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<PutQuery>,
    body: String,
) -> Result<Response, ApiError> {
    let doc = parse_scenario(&body, mode(q.lenient))?;
    let stored = state.store.put(&id, doc).map_err(|full| {
        ApiError::new(
            StatusCode::INSUFFICIENT_STORAGE,
            IssueCode::Computation,
            "",
            format!("scenario store is full ({} entries)", full.capacity),
        )
    })?;
    Ok(ok_json(&*stored))
}

async fn get_scenario(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let stored = state.store.get(&id).ok_or_else(|| {
        ApiError::new(StatusCode::NOT_FOUND, IssueCode::InvalidValue, "id", format!("no scenario `{id}`"))
    })?;
    Ok(json_response(StatusCode::OK, serialize_document(&stored.document)))
}
