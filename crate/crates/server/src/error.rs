use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use mathworld::assessment::AssessmentError;
use mathworld::lesson::LessonError;
use mathworld::rewards::RewardError;
use mathworld::store::StoreError;
use serde_json::json;

/// Error returned by a handler. Client mistakes map to 4xx; storage faults
/// map to 500 so clients know a retry with the same request id is safe.
#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    Forbidden(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Unprocessable(String),
    #[error("{0}")]
    Internal(String),
}

impl ApiError {
    fn parts(&self) -> (StatusCode, &'static str) {
        match self {
            ApiError::BadRequest(_) => (StatusCode::BAD_REQUEST, "bad_request"),
            ApiError::Forbidden(_) => (StatusCode::FORBIDDEN, "locked"),
            ApiError::NotFound(_) => (StatusCode::NOT_FOUND, "not_found"),
            ApiError::Conflict(_) => (StatusCode::CONFLICT, "conflict"),
            ApiError::Unprocessable(_) => (StatusCode::UNPROCESSABLE_ENTITY, "invalid"),
            ApiError::Internal(_) => (StatusCode::INTERNAL_SERVER_ERROR, "storage"),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, kind) = self.parts();
        if status.is_server_error() {
            tracing::error!(error = %self, "request failed");
        }
        (status, Json(json!({ "error": kind, "message": self.to_string() }))).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::NotFound(_) => ApiError::NotFound(e.to_string()),
            StoreError::Validation(_) => ApiError::Unprocessable(e.to_string()),
            StoreError::Rejected(r) => r.into(),
            e => ApiError::Internal(e.to_string()),
        }
    }
}

impl From<RewardError> for ApiError {
    fn from(e: RewardError) -> Self {
        match e {
            RewardError::InsufficientBalance { .. } => ApiError::Conflict(e.to_string()),
            RewardError::UnknownItem(_) => ApiError::NotFound(e.to_string()),
            RewardError::Config(_) => ApiError::Internal(e.to_string()),
        }
    }
}

impl From<LessonError> for ApiError {
    fn from(e: LessonError) -> Self {
        match e {
            LessonError::Locked { .. } => ApiError::Forbidden(e.to_string()),
            LessonError::State(_) => ApiError::Conflict(e.to_string()),
            LessonError::Config(_) => ApiError::Unprocessable(e.to_string()),
        }
    }
}

impl From<AssessmentError> for ApiError {
    fn from(e: AssessmentError) -> Self {
        ApiError::Unprocessable(e.to_string())
    }
}
