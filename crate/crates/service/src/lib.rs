//! HTTP/WebSocket service around the soft robot toolkit.
//!
//! | Route | Method | Body |
//! |---|---|---|
//! | `/state` | GET | current [`TeleopState`](softsnake_core::teleop::TeleopState) |
//! | `/config` | GET | [`SimConfig`] |
//! | `/teleop` | WebSocket | [`softsnake_core::wire`] protocol |
//! | `/api/design` | POST | `DesignInputs` -> `DesignReport` |
//! | `/api/workspace` | POST | `WorkspaceRequest` -> `WorkspaceResponse` |
//! | `/api/snake` | POST | `SnakeRequest` -> `SnakeReport` |
//! | `/api/evaluate` | POST | `EvaluateRequest` -> `EvaluationReport` |
//! | `/health` | GET | `ok` |
//!
//! Anything else is served from the UI asset directory when one is set.

pub mod api;
pub mod ticker;
pub mod ws;

use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;

use axum::routing::{get, post};
use axum::Router;
use softsnake_core::teleop::{SimConfig, Simulator};
use tokio::net::TcpListener;
use tokio::task::JoinHandle;
use tower_http::services::ServeDir;

pub use ticker::{Command, SimHandle};

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error(transparent)]
    Config(#[from] softsnake_core::Error),
    #[error("cannot bind {addr}: {source}")]
    Bind { addr: SocketAddr, source: std::io::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone)]
pub struct AppState {
    pub sim: SimHandle,
}

#[derive(Debug, Clone, Default)]
pub struct ServiceOptions {
    pub sim: SimConfig,
    /// Directory of built UI assets served at `/`.
    pub ui_dir: Option<PathBuf>,
}

pub fn router(state: AppState, ui_dir: Option<PathBuf>) -> Router {
    let app = Router::new()
        .route("/state", get(api::state))
        .route("/config", get(api::config))
        .route("/health", get(api::health))
        .route("/teleop", get(ws::upgrade))
        .route("/api/design", post(api::design))
        .route("/api/workspace", post(api::workspace))
        .route("/api/snake", post(api::snake))
        .route("/api/evaluate", post(api::evaluate))
        .with_state(state);
    match ui_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app,
    }
}

/// A running service: its bound address plus the server and ticker tasks.
pub struct Running {
    pub addr: SocketAddr,
    pub sim: SimHandle,
    pub server: JoinHandle<std::io::Result<()>>,
    pub ticker: JoinHandle<()>,
}

/// Binds `addr`, starts the ticker and serves until the server task ends.
pub async fn start(
    addr: SocketAddr,
    options: ServiceOptions,
    trajectory: Option<Box<dyn Write + Send>>,
) -> Result<Running, ServiceError> {
    let listener = TcpListener::bind(addr)
        .await
        .map_err(|source| ServiceError::Bind { addr, source })?;
    let addr = listener.local_addr()?;
    let simulator = Simulator::new(options.sim)?;
    let (sim, ticker) = ticker::spawn(simulator, trajectory)?;
    let app = router(AppState { sim: sim.clone() }, options.ui_dir);
    let server = tokio::spawn(async move { axum::serve(listener, app).await });
    tracing::info!("listening on http://{addr}");
    Ok(Running {
        addr,
        sim,
        server,
        ticker,
    })
}
