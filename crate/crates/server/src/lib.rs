//! HTTP front end for the estimator. Handlers are pure functions of the
//! request body; the only shared state is the CORS allowlist.

use aquameter_core::service::{self, SweepRequest};
use aquameter_core::{Error, ScenarioDoc, ValidationError};
use axum::extract::rejection::JsonRejection;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::trace::TraceLayer;

pub const DEFAULT_CORS_ORIGIN: &str = "http://localhost:5173";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectRequest {
    #[serde(flatten)]
    pub scenario: ScenarioDoc,
    /// Replaces `projection.qph` when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qph: Option<Vec<f64>>,
}

/// Body of every non-2xx response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<ValidationError>,
}

pub enum ApiError {
    Malformed(StatusCode, String),
    Core(Error),
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        let status = match r {
            JsonRejection::MissingJsonContentType(_) => StatusCode::UNSUPPORTED_MEDIA_TYPE,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError::Malformed(status, r.body_text())
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError::Core(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::Malformed(status, msg) => (
                status,
                ErrorBody {
                    error: msg,
                    errors: vec![],
                },
            ),
            ApiError::Core(Error::Invalid(list)) => (
                StatusCode::UNPROCESSABLE_ENTITY,
                ErrorBody {
                    error: "validation failed".into(),
                    errors: list.0,
                },
            ),
            ApiError::Core(e) if e.is_validation() => (
                StatusCode::UNPROCESSABLE_ENTITY,
                ErrorBody {
                    error: "validation failed".into(),
                    errors: vec![ValidationError::new("", e.to_string())],
                },
            ),
            ApiError::Core(e) => (
                StatusCode::INTERNAL_SERVER_ERROR,
                ErrorBody {
                    error: e.to_string(),
                    errors: vec![],
                },
            ),
        };
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

/// The body must be a JSON object; serde alone would also accept a bare
/// array as a struct in sequence form.
fn document<T: serde::de::DeserializeOwned>(
    body: Result<Json<serde_json::Value>, JsonRejection>,
) -> Result<T, ApiError> {
    let Json(value) = body?;
    if !value.is_object() {
        return Err(ApiError::Malformed(
            StatusCode::BAD_REQUEST,
            "request body must be a JSON object".into(),
        ));
    }
    serde_json::from_value(value).map_err(|e| ApiError::Malformed(StatusCode::BAD_REQUEST, e.to_string()))
}

async fn estimate(body: Result<Json<serde_json::Value>, JsonRejection>) -> ApiResult<service::EstimateResponse> {
    let doc: ScenarioDoc = document(body)?;
    Ok(Json(service::estimate(&doc, None)?))
}

async fn sweep(body: Result<Json<serde_json::Value>, JsonRejection>) -> ApiResult<service::SweepResponse> {
    let req: SweepRequest = document(body)?;
    Ok(Json(service::sweep(&req.scenario, None, req.kind)?))
}

async fn project(body: Result<Json<serde_json::Value>, JsonRejection>) -> ApiResult<service::ProjectResponse> {
    let req: ProjectRequest = document(body)?;
    Ok(Json(service::project(&req.scenario, None, req.qph.as_deref())?))
}

async fn defaults() -> Json<service::DefaultsResponse> {
    Json(service::defaults())
}

async fn healthz() -> &'static str {
    "ok"
}

/// Origins that are not valid header values are skipped.
pub fn cors_layer(origins: &[String]) -> CorsLayer {
    let list: Vec<HeaderValue> = origins.iter().filter_map(|o| HeaderValue::from_str(o).ok()).collect();
    CorsLayer::new()
        .allow_origin(AllowOrigin::list(list))
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE])
}

pub fn router(cors_origins: &[String]) -> Router {
    Router::new()
        .route("/v1/estimate", post(estimate))
        .route("/v1/sweep", post(sweep))
        .route("/v1/project", post(project))
        .route("/v1/defaults", get(defaults))
        .route("/healthz", get(healthz))
        .layer(cors_layer(cors_origins))
        .layer(TraceLayer::new_for_http())
}
