//! JSON endpoints for the design and analysis operations.

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::de::DeserializeOwned;
use softsnake_core::evaluation::{classify, EvaluationReport};
use softsnake_core::kinematics::{workspace_sample, DhChain};
use softsnake_core::optimizer::{design_pipeline, DesignInputs, DesignReport};
use softsnake_core::snake::{snake_report, SnakeReport};
use softsnake_core::teleop::{SimConfig, TeleopState};
use softsnake_core::wire::{
    ApiErrorBody, ApiErrorKind, EvaluateRequest, SnakeRequest, WorkspaceRequest, WorkspaceResponse,
};

use crate::AppState;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ApiErrorBody,
}

impl ApiError {
    pub fn validation(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            body: ApiErrorBody {
                kind: ApiErrorKind::Validation,
                message: message.into(),
            },
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: ApiErrorBody {
                kind: ApiErrorKind::Runtime,
                message: message.into(),
            },
        }
    }
}

impl From<softsnake_core::Error> for ApiError {
    fn from(e: softsnake_core::Error) -> Self {
        ApiError::validation(e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.body }))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

/// Parses a JSON body, reporting malformed input as a validation error
/// with the same envelope as every other failure.
fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::validation(format!("malformed request: {e}")))
}

pub async fn state(State(app): State<AppState>) -> Json<TeleopState> {
    Json(app.sim.snapshot())
}

pub async fn config(State(app): State<AppState>) -> Json<SimConfig> {
    Json(*app.sim.config())
}

pub async fn health() -> &'static str {
    "ok"
}

pub async fn design(body: Bytes) -> ApiResult<DesignReport> {
    let inputs: DesignInputs = parse(&body)?;
    Ok(Json(design_pipeline(&inputs)?))
}

pub async fn workspace(body: Bytes) -> ApiResult<WorkspaceResponse> {
    let req: WorkspaceRequest = parse(&body)?;
    let cloud = tokio::task::spawn_blocking(move || {
        workspace_sample(&DhChain::default(), req.steps, req.theta_lo, req.theta_hi)
    })
    .await
    .map_err(|e| ApiError::runtime(e.to_string()))??;
    Ok(Json(WorkspaceResponse {
        summary: cloud.summary(),
        points: req.include_points.then_some(cloud.points),
    }))
}

pub async fn snake(body: Bytes) -> ApiResult<SnakeReport> {
    let req: SnakeRequest = parse(&body)?;
    Ok(Json(snake_report(&req.joint_angles, &req.link_lengths)?))
}

pub async fn evaluate(body: Bytes) -> ApiResult<EvaluationReport> {
    let req: EvaluateRequest = parse(&body)?;
    Ok(Json(classify(&req.metrics, &req.thresholds)?))
}
