//! `/teleop` WebSocket: inbound input messages, outbound state frames.

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::Response;
use softsnake_core::teleop::TeleopInput;
use softsnake_core::wire::{ClientMessage, ServerMessage, PROTOCOL_VERSION};
use tokio::sync::broadcast::error::RecvError;

use crate::ticker::{Command, SimHandle};
use crate::AppState;

pub async fn upgrade(ws: WebSocketUpgrade, State(app): State<AppState>) -> Response {
    ws.on_upgrade(move |socket| session(socket, app.sim))
}

/// Decodes one client text message into a ticker command.
pub fn decode(text: &str) -> Result<Command, String> {
    let msg: ClientMessage = serde_json::from_str(text).map_err(|e| format!("malformed message: {e}"))?;
    if msg.version() != PROTOCOL_VERSION {
        return Err(format!(
            "unsupported protocol version {} (server speaks {PROTOCOL_VERSION})",
            msg.version()
        ));
    }
    match TeleopInput::try_from(&msg) {
        Ok(input) => input
            .sanitized()
            .map(Command::Input)
            .map_err(|e| e.to_string()),
        Err(()) => Ok(Command::Reset),
    }
}

async fn send_error(socket: &mut WebSocket, message: String) -> bool {
    let body = serde_json::to_string(&ServerMessage::error(message)).expect("error frames serialize");
    socket.send(Message::Text(body.into())).await.is_ok()
}

/// Malformed messages get an error frame; the connection stays open.
async fn session(mut socket: WebSocket, sim: SimHandle) {
    let mut frames = sim.subscribe();
    loop {
        tokio::select! {
            frame = frames.recv() => match frame {
                Ok(text) => {
                    if socket.send(Message::Text(text)).await.is_err() {
                        break;
                    }
                }
                Err(RecvError::Lagged(n)) => tracing::debug!("client lagged by {n} frames"),
                Err(RecvError::Closed) => break,
            },
            incoming = socket.recv() => match incoming {
                Some(Ok(Message::Text(text))) => match decode(text.as_str()) {
                    Ok(command) => {
                        if !sim.send(command) {
                            break;
                        }
                    }
                    Err(e) => {
                        if !send_error(&mut socket, e).await {
                            break;
                        }
                    }
                },
                Some(Ok(Message::Binary(_))) => {
                    if !send_error(&mut socket, "binary messages are not supported".into()).await {
                        break;
                    }
                }
                Some(Ok(Message::Close(_))) | None | Some(Err(_)) => break,
                Some(Ok(_)) => {}
            },
        }
    }
}
