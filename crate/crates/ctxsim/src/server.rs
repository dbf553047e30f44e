//! JSON-over-HTTP service.
//!
//! The ontology is fixed for the life of the process. Contexts live in a
//! registry that can be replaced entry by entry through `POST /api/contexts`;
//! each request clones the `Arc` of the context it needs up front, so an
//! upload never changes a request already in flight.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::sync::{Arc, RwLock};

use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use ctxsim_core::{ApplicationContext, Engine, Error, Ontology};
use serde::{Deserialize, Serialize};

use crate::format::{self, ContextDoc, InstanceDoc, LoadError};
use crate::render::{MatrixRendering, MatrixView, RankingView, SimilarityView};

#[derive(Clone)]
pub struct AppState {
    ontology: Arc<Ontology>,
    contexts: Arc<RwLock<BTreeMap<String, Arc<ApplicationContext>>>>,
}

impl AppState {
    pub fn new(ontology: Ontology, contexts: impl IntoIterator<Item = ApplicationContext>) -> Self {
        let contexts = contexts
            .into_iter()
            .map(|c| (c.name().to_string(), Arc::new(c)))
            .collect();
        AppState {
            ontology: Arc::new(ontology),
            contexts: Arc::new(RwLock::new(contexts)),
        }
    }

    pub fn ontology(&self) -> &Ontology {
        &self.ontology
    }

    pub fn context(&self, name: &str) -> Option<Arc<ApplicationContext>> {
        self.contexts
            .read()
            .expect("context registry lock poisoned")
            .get(name)
            .cloned()
    }

    /// Inserts or replaces the context with the same name.
    pub fn put_context(&self, context: ApplicationContext) {
        self.contexts
            .write()
            .expect("context registry lock poisoned")
            .insert(context.name().to_string(), Arc::new(context));
    }

    fn snapshot(&self) -> Vec<Arc<ApplicationContext>> {
        self.contexts
            .read()
            .expect("context registry lock poisoned")
            .values()
            .cloned()
            .collect()
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, error: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                error: error.into(),
                diagnostics: Vec::new(),
            },
        }
    }

    fn bad_request(msg: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, msg)
    }

    fn not_found(msg: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, msg)
    }
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        let status = match err {
            Error::UnknownInstance(_) | Error::UnknownClass(_) => StatusCode::NOT_FOUND,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError::new(status, err.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn required<'a>(value: &'a Option<String>, name: &str) -> ApiResult<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| ApiError::bad_request(format!("missing query parameter `{name}`")))
}

fn lookup_context(state: &AppState, name: &str) -> ApiResult<Arc<ApplicationContext>> {
    state
        .context(name)
        .ok_or_else(|| ApiError::not_found(format!("unknown context `{name}`")))
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/instances", get(list_instances))
        .route("/api/instances/{id}", get(get_instance))
        .route("/api/contexts", get(list_contexts).post(upload_context))
        .route("/api/similarity", get(similarity))
        .route("/api/rank", get(rank))
        .route("/api/matrix", get(matrix))
        .route("/api/matrix.pgm", get(matrix_pgm))
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

async fn list_instances(State(state): State<AppState>) -> Json<Vec<InstanceDoc>> {
    Json(
        state
            .ontology()
            .instances()
            .map(format::instance_to_doc)
            .collect(),
    )
}

async fn get_instance(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<InstanceDoc>> {
    state
        .ontology()
        .instance(&id)
        .map(|i| Json(format::instance_to_doc(i)))
        .ok_or_else(|| ApiError::not_found(format!("unknown instance `{id}`")))
}

async fn list_contexts(State(state): State<AppState>) -> Json<Vec<ContextDoc>> {
    Json(
        state
            .snapshot()
            .iter()
            .map(|c| ContextDoc::from_context(c))
            .collect(),
    )
}

/// Accepts a context document as JSON (`application/json`) or TOML (any
/// other content type).
async fn upload_context(
    State(state): State<AppState>,
    headers: HeaderMap,
    body: String,
) -> ApiResult<Json<ContextDoc>> {
    let is_json = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("application/json"));
    let context = if is_json {
        let doc: ContextDoc = serde_json::from_str(&body)
            .map_err(|e| ApiError::bad_request(format!("malformed context document: {e}")))?;
        doc.into_context(state.ontology())
    } else {
        format::parse_context(&body, state.ontology())
    };
    let context = match context {
        Ok(c) => c,
        Err(err @ LoadError::Parse { .. }) => {
            return Err(ApiError::bad_request(format!(
                "malformed context document: {err}"
            )))
        }
        Err(err) => {
            return Err(ApiError {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                body: ErrorBody {
                    error: "context validation failed".into(),
                    diagnostics: err.diagnostics(),
                },
            })
        }
    };
    let doc = ContextDoc::from_context(&context);
    tracing::info!(context = context.name(), "context stored");
    state.put_context(context);
    Ok(Json(doc))
}

#[derive(Debug, Deserialize)]
struct SimilarityParams {
    a: Option<String>,
    b: Option<String>,
    context: Option<String>,
}

async fn similarity(
    State(state): State<AppState>,
    Query(p): Query<SimilarityParams>,
) -> ApiResult<Json<SimilarityView>> {
    let (a, b) = (required(&p.a, "a")?, required(&p.b, "b")?);
    let context = lookup_context(&state, required(&p.context, "context")?)?;
    let score = Engine::new(state.ontology()).sim(&context, a, b)?;
    Ok(Json(SimilarityView::new(a, b, context.name(), &score)))
}

#[derive(Debug, Deserialize)]
struct RankParams {
    query: Option<String>,
    context: Option<String>,
}

async fn rank(
    State(state): State<AppState>,
    Query(p): Query<RankParams>,
) -> ApiResult<Json<RankingView>> {
    let query = required(&p.query, "query")?;
    let context = lookup_context(&state, required(&p.context, "context")?)?;
    let ranking = Engine::new(state.ontology()).rank(&context, query)?;
    Ok(Json(RankingView::from(&ranking)))
}

#[derive(Debug, Deserialize)]
struct MatrixParams {
    context: Option<String>,
}

fn compute_matrix(
    state: &AppState,
    p: &MatrixParams,
) -> ApiResult<(Arc<ApplicationContext>, ctxsim_core::SimilarityMatrix)> {
    let context = lookup_context(state, required(&p.context, "context")?)?;
    let ids = crate::matrix_ids(state.ontology(), &context);
    let engine = Engine::new(state.ontology());
    let m = crate::par_similarity_matrix(&engine, &context, &ids)?;
    Ok((context, m))
}

async fn matrix(
    State(state): State<AppState>,
    Query(p): Query<MatrixParams>,
) -> ApiResult<Json<MatrixView>> {
    let (context, m) = compute_matrix(&state, &p)?;
    Ok(Json(MatrixView::new(context.name(), &m)))
}

async fn matrix_pgm(
    State(state): State<AppState>,
    Query(p): Query<MatrixParams>,
) -> ApiResult<Response> {
    let (_, m) = compute_matrix(&state, &p)?;
    Ok((
        [(header::CONTENT_TYPE, "image/x-portable-graymap")],
        MatrixRendering::new(&m).to_pgm(),
    )
        .into_response())
}
