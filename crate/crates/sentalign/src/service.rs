//! HTTP backend for ground-truth creation and blind match classification.
//!
//! ```text
//! GET  /api/tasks/next?kind=classification|ground_truth[&annotator=NAME]
//! POST /api/ground-truth/{pair_id}   {"matches": [[simple, complex], ...]}
//! POST /api/labels/{task_id}         {"verdict": "match|partial|no_match", "annotator": "..."}
//! GET  /api/progress
//! GET  /api/export/labels            JSON lines
//! GET  /api/export/ground-truth      .gt text
//! ```
//!
//! Classification payloads carry only the task id and the two sentence
//! texts. The variant is looked up and stored server-side.

use std::collections::{BTreeMap, HashMap};
use std::fs::OpenOptions;
use std::future::Future;
use std::io::Write;
use std::path::Path as FsPath;
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, Query, Request, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use log::{info, warn};
use sentalign_core::eval::{GroundTruth, LabelRecord, Verdict};
use sentalign_core::model::Corpus;
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use crate::config::ServiceConfig;
use crate::ground_truth;
use crate::labels::{read_tasks, LabelStore, TaskRecord};
use crate::{Error, Result};

pub const AUDIT_FILE: &str = "audit.jsonl";
const ANONYMOUS: &str = "anonymous";
const GUIDANCE: &str = "Link every simple sentence to the one German sentence it renders. \
Explanatory simple sentences up to two sentences away from a linked sentence may be linked to the same German sentence.";

#[derive(Debug)]
struct Lease {
    annotator: String,
    since: Instant,
}

struct Inner {
    tasks: Vec<TaskRecord>,
    labelled: HashMap<String, LabelRecord>,
    task_leases: HashMap<usize, Lease>,
    pair_leases: HashMap<usize, Lease>,
    ground_truth: BTreeMap<String, GroundTruth>,
    store: LabelStore,
}

struct Shared {
    config: ServiceConfig,
    corpus: Corpus,
    pair_index: HashMap<String, usize>,
    inner: Mutex<Inner>,
}

#[derive(Clone)]
pub struct AppState(Arc<Shared>);

struct ApiError(StatusCode, String);

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError(status, message.into())
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

type ApiResult<T> = std::result::Result<T, ApiError>;

impl AppState {
    /// Loads tasks, stored labels and ground truth. An unreadable label store is fatal.
    pub fn new(config: ServiceConfig, corpus: Corpus) -> Result<Self> {
        let tasks = if config.tasks.is_file() {
            read_tasks(&config.tasks)?
        } else {
            warn!("{}: no task file, classification queue is empty", config.tasks.display());
            Vec::new()
        };
        let (store, existing) = LabelStore::open(&config.labels)?;
        let labelled = existing.into_iter().map(|r| (r.task_id.clone(), r)).collect();
        let ground_truth = if config.ground_truth_dir.is_dir() {
            ground_truth::read(&config.ground_truth_dir)?.into_iter().map(|g| (g.pair_id.clone(), g)).collect()
        } else {
            BTreeMap::new()
        };
        let pair_index = corpus.iter_pairs().enumerate().map(|(i, p)| (p.id(), i)).collect();
        let inner =
            Inner { tasks, labelled, task_leases: HashMap::new(), pair_leases: HashMap::new(), ground_truth, store };
        Ok(AppState(Arc::new(Shared { config, corpus, pair_index, inner: Mutex::new(inner) })))
    }

    fn lock(&self) -> MutexGuard<'_, Inner> {
        self.0.inner.lock().unwrap_or_else(|p| p.into_inner())
    }

    fn lease_live(&self, lease: &Lease, now: Instant) -> bool {
        !self.0.config.multi_annotator
            || now.duration_since(lease.since) < Duration::from_secs(self.0.config.lease_minutes * 60)
    }
}

/// Lowest index not done whose lease is held by `annotator` or free. The
/// annotator's own lease wins over a free item.
fn pick(
    state: &AppState,
    leases: &mut HashMap<usize, Lease>,
    len: usize,
    done: impl Fn(usize) -> bool,
    annotator: &str,
) -> Option<usize> {
    let now = Instant::now();
    let own = (0..len)
        .find(|i| !done(*i) && leases.get(i).is_some_and(|l| l.annotator == annotator && state.lease_live(l, now)));
    let chosen =
        own.or_else(|| (0..len).find(|i| !done(*i) && !leases.get(i).is_some_and(|l| state.lease_live(l, now))))?;
    leases.insert(chosen, Lease { annotator: annotator.to_string(), since: now });
    Some(chosen)
}

#[derive(Deserialize)]
struct NextQuery {
    kind: Option<String>,
    annotator: Option<String>,
}

async fn next_task(State(state): State<AppState>, Query(q): Query<NextQuery>) -> ApiResult<Response> {
    let annotator = q.annotator.as_deref().unwrap_or(ANONYMOUS);
    let mut inner = state.lock();
    let inner = &mut *inner;
    match q.kind.as_deref() {
        Some("classification") => {
            let (tasks, labelled) = (&inner.tasks, &inner.labelled);
            let picked = pick(
                &state,
                &mut inner.task_leases,
                tasks.len(),
                |i| labelled.contains_key(&tasks[i].task.task_id),
                annotator,
            );
            Ok(match picked {
                Some(i) => {
                    let t = &inner.tasks[i];
                    Json(json!({
                        "task_id": t.task.task_id,
                        "kind": "classification",
                        "simple_sentence": t.simple_sentence,
                        "complex_sentence": t.complex_sentence,
                    }))
                    .into_response()
                }
                None => StatusCode::NO_CONTENT.into_response(),
            })
        }
        Some("ground_truth") => {
            let corpus = &state.0.corpus;
            let gt = &inner.ground_truth;
            let picked = pick(
                &state,
                &mut inner.pair_leases,
                corpus.pairs.len(),
                |i| gt.contains_key(&corpus.pair(i).id()),
                annotator,
            );
            Ok(match picked {
                Some(i) => {
                    let pair = corpus.pair(i);
                    let list = |a: &sentalign_core::Article| -> Vec<Value> {
                        a.sentences.iter().map(|s| json!({ "index": s.index, "text": s.raw_text })).collect()
                    };
                    Json(json!({
                        "task_id": pair.id(),
                        "kind": "ground_truth",
                        "pair_id": pair.id(),
                        "simple": list(pair.simple),
                        "complex": list(pair.complex),
                        "guidance": GUIDANCE,
                    }))
                    .into_response()
                }
                None => StatusCode::NO_CONTENT.into_response(),
            })
        }
        Some(other) => Err(ApiError::new(StatusCode::BAD_REQUEST, format!("unknown task kind {other:?}"))),
        None => Err(ApiError::new(StatusCode::BAD_REQUEST, "query parameter `kind` is required")),
    }
}

#[derive(Deserialize)]
struct GroundTruthBody {
    matches: Vec<(usize, usize)>,
}

fn append_audit(dir: &FsPath, entry: &Value) -> Result<()> {
    let path = dir.join(AUDIT_FILE);
    let mut file = OpenOptions::new().create(true).append(true).open(&path).map_err(Error::io(&path))?;
    let mut line = entry.to_string();
    line.push('\n');
    file.write_all(line.as_bytes()).map_err(Error::io(&path))?;
    file.sync_data().map_err(Error::io(&path))
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

async fn submit_ground_truth(
    State(state): State<AppState>,
    Path(pair_id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let Some(&index) = state.0.pair_index.get(&pair_id) else {
        return Err(ApiError::new(StatusCode::NOT_FOUND, format!("unknown pair {pair_id}")));
    };
    let body: GroundTruthBody = serde_json::from_slice(&body).map_err(|e| {
        ApiError::new(StatusCode::BAD_REQUEST, format!("expected {{\"matches\": [[simple, complex], ...]}}: {e}"))
    })?;
    let pair = state.0.corpus.pair(index);
    let (n, m) = (pair.simple.sentences.len(), pair.complex.sentences.len());
    let mut seen = std::collections::HashSet::new();
    for &(s, c) in &body.matches {
        if s >= n || c >= m {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                format!("link ({s}, {c}) is out of range: the pair has {n} simple and {m} complex sentences"),
            ));
        }
        if !seen.insert(s) {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                format!("simple sentence {s} is linked more than once; each simple sentence aligns to at most one complex sentence"),
            ));
        }
    }
    let gt = GroundTruth::new(pair_id.clone(), body.matches)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.to_string()))?;

    let dir = &state.0.config.ground_truth_dir;
    let mut inner = state.lock();
    ground_truth::write_file(&ground_truth::pair_path(dir, &pair_id), std::slice::from_ref(&gt))?;
    if let Some(previous) = inner.ground_truth.get(&pair_id) {
        let previous: Vec<(usize, usize)> = previous.matches().iter().copied().collect();
        append_audit(dir, &json!({ "pair_id": pair_id, "replaced": previous, "timestamp": timestamp() }))?;
    }
    let matches: Vec<(usize, usize)> = gt.matches().iter().copied().collect();
    inner.ground_truth.insert(pair_id.clone(), gt);
    inner.pair_leases.remove(&index);
    info!("ground truth stored for {pair_id} ({} links)", matches.len());
    Ok(Json(json!({ "pair_id": pair_id, "matches": matches })))
}

#[derive(Deserialize)]
struct LabelBody {
    verdict: String,
    annotator: Option<String>,
}

async fn submit_label(
    State(state): State<AppState>,
    Path(task_id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let body: LabelBody = serde_json::from_slice(&body)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, format!("expected {{\"verdict\": ...}}: {e}")))?;
    let mut inner = state.lock();
    let Some(index) = inner.tasks.iter().position(|t| t.task.task_id == task_id) else {
        return Err(ApiError::new(StatusCode::NOT_FOUND, format!("unknown task {task_id}")));
    };
    let verdict: Verdict = body.verdict.parse().map_err(|_| {
        ApiError::new(
            StatusCode::BAD_REQUEST,
            format!("invalid verdict {:?}; use match, partial or no_match", body.verdict),
        )
    })?;
    if inner.labelled.contains_key(&task_id) {
        return Err(ApiError::new(StatusCode::CONFLICT, format!("task {task_id} is already labelled")));
    }
    let annotator = body.annotator.unwrap_or_else(|| ANONYMOUS.to_string());
    if let Some(lease) = inner.task_leases.get(&index) {
        if state.0.config.multi_annotator && lease.annotator != annotator && state.lease_live(lease, Instant::now()) {
            return Err(ApiError::new(StatusCode::CONFLICT, format!("task {task_id} is leased to another annotator")));
        }
    }
    let task = inner.tasks[index].task.clone();
    let record = LabelRecord {
        record_id: format!("label-{:06}", inner.labelled.len() + 1),
        task_id: task.task_id.clone(),
        variant: task.variant,
        pair_id: task.pair_id,
        simple_index: task.simple_index,
        complex_index: task.complex_index,
        verdict,
        annotator,
        timestamp: timestamp(),
    };
    inner.store.append(&record)?;
    inner.task_leases.remove(&index);
    let response = json!({ "task_id": record.task_id, "record_id": record.record_id, "verdict": record.verdict });
    inner.labelled.insert(task_id, record);
    Ok(Json(response))
}

async fn progress(State(state): State<AppState>) -> Json<Value> {
    let inner = state.lock();
    let total = inner.tasks.len();
    let labelled = inner.tasks.iter().filter(|t| inner.labelled.contains_key(&t.task.task_id)).count();
    let pairs = state.0.corpus.pairs.len();
    let done = state.0.pair_index.keys().filter(|id| inner.ground_truth.contains_key(*id)).count();
    Json(json!({
        "classification": { "total": total, "labelled": labelled, "remaining": total - labelled },
        "ground_truth": { "total": pairs, "completed": done, "remaining": pairs - done },
    }))
}

async fn export_labels(State(state): State<AppState>) -> ApiResult<Response> {
    let text = state.lock().store.snapshot()?;
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], text).into_response())
}

async fn export_ground_truth(State(state): State<AppState>) -> Response {
    let inner = state.lock();
    let all: Vec<GroundTruth> = inner.ground_truth.values().cloned().collect();
    ([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], ground_truth::to_text(&all)).into_response()
}

async fn require_token(State(state): State<AppState>, headers: HeaderMap, request: Request, next: Next) -> Response {
    if let Some(token) = &state.0.config.token {
        let given =
            headers.get(header::AUTHORIZATION).and_then(|v| v.to_str().ok()).and_then(|v| v.strip_prefix("Bearer "));
        if given != Some(token.as_str()) {
            return ApiError::new(StatusCode::UNAUTHORIZED, "missing or wrong bearer token").into_response();
        }
    }
    next.run(request).await
}

pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/api/tasks/next", get(next_task))
        .route("/api/ground-truth/{pair_id}", post(submit_ground_truth))
        .route("/api/labels/{task_id}", post(submit_label))
        .route("/api/progress", get(progress))
        .route("/api/export/labels", get(export_labels))
        .route("/api/export/ground-truth", get(export_ground_truth))
        .layer(middleware::from_fn_with_state(state.clone(), require_token));
    let app = match &state.0.config.ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.with_state(state)
}

/// Binds the configured address and serves until `shutdown` resolves.
pub async fn serve(
    config: ServiceConfig,
    corpus: Corpus,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<()> {
    let addr = config.addr.clone();
    let state = AppState::new(config, corpus)?;
    let listener = tokio::net::TcpListener::bind(&addr).await.map_err(Error::io(&addr))?;
    info!("listening on {addr}");
    axum::serve(listener, router(state)).with_graceful_shutdown(shutdown).await.map_err(Error::io(&addr))
}
