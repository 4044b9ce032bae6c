//! HTTP facade over an [`Engine`].

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use serde::Deserialize;
use thiserror::Error;
use tower_http::services::ServeDir;

use crate::engine::{AppConfig, Engine, LoadError, RequestError};
use crate::sealevel::TimelineError;

#[derive(Debug, Error)]
pub enum ServeError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("cannot listen on {addr}: {source}")]
    Bind {
        addr: String,
        source: std::io::Error,
    },
    #[error("server error: {0}")]
    Io(#[from] std::io::Error),
}

/// JSON error body `{error, message}` with an HTTP status.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    error: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, error: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            error,
            message: message.into(),
        }
    }
}

impl From<RequestError> for ApiError {
    fn from(e: RequestError) -> Self {
        let message = e.to_string();
        match e {
            RequestError::Timeline(TimelineError::YearOutOfRange(_)) => {
                Self::new(StatusCode::BAD_REQUEST, "YearOutOfRange", message)
            }
            RequestError::Timeline(TimelineError::IndexOutOfRange(_)) => {
                Self::new(StatusCode::BAD_REQUEST, "IndexOutOfRange", message)
            }
            RequestError::UnknownPoi(_) => Self::new(StatusCode::NOT_FOUND, "UnknownPoi", message),
            RequestError::View(_) => Self::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "PoiViewUnavailable",
                message,
            ),
            RequestError::Scene(_) => {
                Self::new(StatusCode::INTERNAL_SERVER_ERROR, "SceneError", message)
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "error": self.error, "message": self.message });
        (self.status, json_headers(), body.to_string()).into_response()
    }
}

fn json_headers() -> [(header::HeaderName, &'static str); 1] {
    [(header::CONTENT_TYPE, "application/json")]
}

#[derive(Debug, Deserialize)]
pub struct YearQuery {
    year: Option<String>,
}

impl YearQuery {
    fn year(&self) -> Result<i64, ApiError> {
        let raw = self.year.as_deref().ok_or_else(|| {
            ApiError::new(
                StatusCode::BAD_REQUEST,
                "MissingParameter",
                "query parameter `year` is required",
            )
        })?;
        raw.trim().parse().map_err(|_| {
            ApiError::new(
                StatusCode::BAD_REQUEST,
                "InvalidParameter",
                format!("`{raw}` is not an integer year"),
            )
        })
    }
}

type AppState = Arc<Engine>;

fn json(body: String) -> Response {
    (json_headers(), body).into_response()
}

async fn meta(State(e): State<AppState>) -> Response {
    json(e.meta_json())
}

async fn curve(State(e): State<AppState>) -> Response {
    (
        [(header::CONTENT_TYPE, "text/csv")],
        e.curve_csv().to_owned(),
    )
        .into_response()
}

async fn pois(State(e): State<AppState>) -> Response {
    json(e.pois_json())
}

async fn poi(
    State(e): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<YearQuery>,
) -> Result<Response, ApiError> {
    let year = q.year()?;
    Ok(json(e.poi_view_json(&id, year)?))
}

async fn flood(
    State(e): State<AppState>,
    Query(q): Query<YearQuery>,
) -> Result<Response, ApiError> {
    Ok(json(e.flood_rle(q.year()?)?))
}

async fn flood_pgm(
    State(e): State<AppState>,
    Query(q): Query<YearQuery>,
) -> Result<Response, ApiError> {
    let bytes = e.flood_pgm(q.year()?)?;
    Ok(([(header::CONTENT_TYPE, "image/x-portable-graymap")], bytes).into_response())
}

async fn stats(
    State(e): State<AppState>,
    Query(q): Query<YearQuery>,
) -> Result<Response, ApiError> {
    Ok(json(e.stats_json(q.year()?)?))
}

const OBJ_TYPE: &str = "model/obj";

async fn terrain_obj(State(e): State<AppState>) -> Response {
    (
        [(header::CONTENT_TYPE, OBJ_TYPE)],
        e.terrain_obj().to_owned(),
    )
        .into_response()
}

async fn ocean_obj(
    State(e): State<AppState>,
    Query(q): Query<YearQuery>,
) -> Result<Response, ApiError> {
    let body = e.ocean_obj(q.year()?)?;
    Ok(([(header::CONTENT_TYPE, OBJ_TYPE)], body).into_response())
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "NotFound", "no such resource")
}

/// Builds the router. Static files are served from the engine's static
/// directory for any path outside `/api`.
pub fn router(engine: Arc<Engine>) -> Router {
    let static_dir = engine.static_dir().map(|p| p.to_path_buf());
    let api = Router::new()
        .route("/api/meta", get(meta))
        .route("/api/curve", get(curve))
        .route("/api/pois", get(pois))
        .route("/api/poi/{id}", get(poi))
        .route("/api/flood", get(flood))
        .route("/api/flood.pgm", get(flood_pgm))
        .route("/api/stats", get(stats))
        .route("/api/mesh/terrain.obj", get(terrain_obj))
        .route("/api/mesh/ocean.obj", get(ocean_obj))
        .route("/api/{*rest}", get(not_found))
        .with_state(engine);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir).fallback(get(not_found))),
        None => api.fallback(not_found),
    }
}

/// Loads the dataset, then serves until interrupted.
pub async fn serve(config: &AppConfig) -> Result<(), ServeError> {
    let engine = Arc::new(Engine::load(config)?);
    let addr = format!("{}:{}", config.listen.address, config.listen.port);
    let listener = tokio::net::TcpListener::bind(&addr)
        .await
        .map_err(|source| ServeError::Bind {
            addr: addr.clone(),
            source,
        })?;
    serve_on(listener, engine).await
}

pub async fn serve_on(
    listener: tokio::net::TcpListener,
    engine: Arc<Engine>,
) -> Result<(), ServeError> {
    let local: SocketAddr = listener.local_addr()?;
    eprintln!("tidelens listening on http://{local}");
    axum::serve(listener, router(engine))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
