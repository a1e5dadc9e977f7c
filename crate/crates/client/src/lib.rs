//! Async client for the softsnake service.
//!
//! ```no_run
//! # async fn demo() -> Result<(), softsnake_client::Error> {
//! use softsnake_client::Client;
//! use softsnake_core::optimizer::DesignInputs;
//!
//! let client = Client::new("http://127.0.0.1:8080")?;
//! let report = client.design(&DesignInputs::default()).await?;
//! println!("T = {} m", report.module.thickness);
//! # Ok(())
//! # }
//! ```

use futures::{SinkExt, StreamExt};
use reqwest::Url;
use serde::de::DeserializeOwned;
use serde::Serialize;
use softsnake_core::evaluation::EvaluationReport;
use softsnake_core::optimizer::{DesignInputs, DesignReport};
use softsnake_core::snake::SnakeReport;
use softsnake_core::teleop::{SimConfig, TeleopInput, TeleopState};
use softsnake_core::wire::{
    ApiErrorBody, ApiErrorKind, ClientMessage, EvaluateRequest, ServerMessage, SnakeRequest,
    WorkspaceRequest, WorkspaceResponse, PROTOCOL_VERSION,
};
use tokio::net::TcpStream;
use tokio_tungstenite::tungstenite::Message;
use tokio_tungstenite::{MaybeTlsStream, WebSocketStream};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid server url: {0}")]
    Url(String),
    #[error("request failed: {0}")]
    Http(#[from] reqwest::Error),
    #[error("server returned {status}: {}", body.message)]
    Api { status: u16, body: ApiErrorBody },
    #[error("websocket: {0}")]
    WebSocket(#[from] tokio_tungstenite::tungstenite::Error),
    #[error("undecodable server message: {0}")]
    Decode(#[from] serde_json::Error),
}

impl Error {
    /// True when the server rejected the request's contents.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Api { body, .. } if body.kind == ApiErrorKind::Validation)
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[derive(serde::Deserialize)]
struct ErrorEnvelope {
    error: ApiErrorBody,
}

#[derive(Debug, Clone)]
pub struct Client {
    http: reqwest::Client,
    base: Url,
}

impl Client {
    pub fn new(base_url: &str) -> Result<Self> {
        let base = Url::parse(base_url).map_err(|e| Error::Url(format!("{base_url}: {e}")))?;
        if !matches!(base.scheme(), "http" | "https") {
            return Err(Error::Url(format!("{base_url}: expected http or https")));
        }
        Ok(Client {
            http: reqwest::Client::new(),
            base,
        })
    }

    fn url(&self, path: &str) -> Result<Url> {
        self.base.join(path).map_err(|e| Error::Url(e.to_string()))
    }

    async fn decode<T: DeserializeOwned>(resp: reqwest::Response) -> Result<T> {
        let status = resp.status();
        let bytes = resp.bytes().await?;
        if status.is_success() {
            return Ok(serde_json::from_slice(&bytes)?);
        }
        let body = match serde_json::from_slice::<ErrorEnvelope>(&bytes) {
            Ok(env) => env.error,
            Err(_) => ApiErrorBody {
                kind: if status.is_client_error() {
                    ApiErrorKind::Validation
                } else {
                    ApiErrorKind::Runtime
                },
                message: String::from_utf8_lossy(&bytes).into_owned(),
            },
        };
        Err(Error::Api {
            status: status.as_u16(),
            body,
        })
    }

    async fn get<T: DeserializeOwned>(&self, path: &str) -> Result<T> {
        let resp = self.http.get(self.url(path)?).send().await?;
        Self::decode(resp).await
    }

    async fn post<B: Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T> {
        let resp = self.http.post(self.url(path)?).json(body).send().await?;
        Self::decode(resp).await
    }

    pub async fn design(&self, inputs: &DesignInputs) -> Result<DesignReport> {
        self.post("/api/design", inputs).await
    }

    pub async fn workspace(&self, req: &WorkspaceRequest) -> Result<WorkspaceResponse> {
        self.post("/api/workspace", req).await
    }

    pub async fn snake(&self, req: &SnakeRequest) -> Result<SnakeReport> {
        self.post("/api/snake", req).await
    }

    pub async fn evaluate(&self, req: &EvaluateRequest) -> Result<EvaluationReport> {
        self.post("/api/evaluate", req).await
    }

    pub async fn state(&self) -> Result<TeleopState> {
        self.get("/state").await
    }

    pub async fn config(&self) -> Result<SimConfig> {
        self.get("/config").await
    }

    /// Opens a teleoperation session on `/teleop`.
    pub async fn teleop(&self) -> Result<TeleopSession> {
        let mut url = self.url("/teleop")?;
        let scheme = if self.base.scheme() == "https" { "wss" } else { "ws" };
        url.set_scheme(scheme)
            .map_err(|()| Error::Url(format!("cannot use {scheme} with {}", self.base)))?;
        let (ws, _) = tokio_tungstenite::connect_async(url.as_str()).await?;
        Ok(TeleopSession { ws })
    }
}

pub struct TeleopSession {
    ws: WebSocketStream<MaybeTlsStream<TcpStream>>,
}

impl TeleopSession {
    async fn send(&mut self, msg: &ClientMessage) -> Result<()> {
        let text = serde_json::to_string(msg)?;
        self.ws.send(Message::text(text)).await?;
        Ok(())
    }

    pub async fn send_input(&mut self, input: &TeleopInput) -> Result<()> {
        self.send(&ClientMessage::input(input)).await
    }

    pub async fn reset(&mut self) -> Result<()> {
        self.send(&ClientMessage::Reset { v: PROTOCOL_VERSION }).await
    }

    /// Next server message, or `None` once the server closes the socket.
    pub async fn next_message(&mut self) -> Result<Option<ServerMessage>> {
        while let Some(msg) = self.ws.next().await {
            match msg? {
                Message::Text(text) => return Ok(Some(serde_json::from_str(text.as_str())?)),
                Message::Close(_) => return Ok(None),
                _ => {}
            }
        }
        Ok(None)
    }

    pub async fn close(mut self) -> Result<()> {
        self.ws.close(None).await?;
        Ok(())
    }
}
