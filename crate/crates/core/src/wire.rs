//! JSON messages exchanged over the `/teleop` WebSocket.
//!
//! Client to server:
//!
//! ```json
//! {"type":"input","v":1,"joystick":{"x":0.5,"y":0.0},"switch":"fwd","mode":"ssr"}
//! {"type":"reset","v":1}
//! ```
//!
//! Server to client, one `state` frame per simulation tick:
//!
//! ```json
//! {"type":"state","v":1,"t":1.02,"mode":"ssr","module_bends":[0.1,0,0.1,0],
//!  "end_effector":{"x":0.39,"y":0.07,"z":0},"ssr":{"x":0.2,"y":0,"heading":0},
//!  "flags":{"clamped":false}}
//! {"type":"error","v":1,"message":"..."}
//! ```

use serde::{Deserialize, Serialize};

use crate::evaluation::{RangeThresholds, RobotMetrics};
use crate::kinematics::{WorkspaceSummary, MODULE_LENGTH};
use crate::teleop::{scm_pose, DriveSwitch, Mode, PlanarPose, StateFlags, TeleopInput, TeleopState};

pub const PROTOCOL_VERSION: u32 = 1;

fn default_version() -> u32 {
    PROTOCOL_VERSION
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Joystick {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientMessage {
    Input {
        #[serde(default = "default_version")]
        v: u32,
        joystick: Joystick,
        switch: DriveSwitch,
        mode: Mode,
    },
    Reset {
        #[serde(default = "default_version")]
        v: u32,
    },
}

impl ClientMessage {
    pub fn input(input: &TeleopInput) -> Self {
        ClientMessage::Input {
            v: PROTOCOL_VERSION,
            joystick: Joystick {
                x: input.joystick_x,
                y: input.joystick_y,
            },
            switch: input.drive_switch,
            mode: input.mode,
        }
    }

    pub fn version(&self) -> u32 {
        match self {
            ClientMessage::Input { v, .. } | ClientMessage::Reset { v } => *v,
        }
    }
}

impl TryFrom<&ClientMessage> for TeleopInput {
    type Error = ();

    fn try_from(msg: &ClientMessage) -> Result<Self, ()> {
        match *msg {
            ClientMessage::Input {
                joystick, switch, mode, ..
            } => Ok(TeleopInput {
                joystick_x: joystick.x,
                joystick_y: joystick.y,
                drive_switch: switch,
                mode,
            }),
            ClientMessage::Reset { .. } => Err(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateFrame {
    pub v: u32,
    pub t: f64,
    pub mode: Mode,
    pub module_bends: [f64; 4],
    pub end_effector: Position3,
    pub ssr: PlanarPose,
    pub flags: StateFlags,
}

impl From<&TeleopState> for StateFrame {
    fn from(state: &TeleopState) -> Self {
        let [x, y, z] = scm_pose(state).end_effector;
        StateFrame {
            v: PROTOCOL_VERSION,
            t: state.sim_time,
            mode: state.mode,
            module_bends: state.module_bends,
            end_effector: Position3 { x, y, z },
            ssr: state.ssr_pose,
            flags: state.flags,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    State(StateFrame),
    Error { v: u32, message: String },
}

impl ServerMessage {
    pub fn error(message: impl Into<String>) -> Self {
        ServerMessage::Error {
            v: PROTOCOL_VERSION,
            message: message.into(),
        }
    }
}

/// Body of `POST /api/workspace`. Angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WorkspaceRequest {
    pub steps: usize,
    pub theta_lo: f64,
    pub theta_hi: f64,
    /// Include the full point cloud, not only the summary.
    pub include_points: bool,
}

impl Default for WorkspaceRequest {
    fn default() -> Self {
        WorkspaceRequest {
            steps: 20,
            theta_lo: 0.0,
            theta_hi: std::f64::consts::FRAC_PI_2,
            include_points: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkspaceResponse {
    pub summary: WorkspaceSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 3]>>,
}

fn default_link_lengths() -> Vec<f64> {
    vec![MODULE_LENGTH; 4]
}

/// Body of `POST /api/snake`. Angles in radians, lengths in meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnakeRequest {
    pub joint_angles: Vec<f64>,
    #[serde(default = "default_link_lengths")]
    pub link_lengths: Vec<f64>,
}

/// Body of `POST /api/evaluate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluateRequest {
    pub metrics: RobotMetrics,
    #[serde(default)]
    pub thresholds: RangeThresholds,
}

/// Error body returned by the HTTP API.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiErrorBody {
    pub kind: ApiErrorKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApiErrorKind {
    /// Malformed request or invalid parameters.
    Validation,
    /// Failure on the server side.
    Runtime,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::teleop::{reset, SimConfig};

    #[test]
    fn input_message_shape() {
        let msg: ClientMessage = serde_json::from_str(
            r#"{"type":"input","joystick":{"x":1,"y":-0.5},"switch":"rev","mode":"ssr"}"#,
        )
        .unwrap();
        assert_eq!(msg.version(), 1);
        let input = TeleopInput::try_from(&msg).unwrap();
        assert_eq!(input.joystick_x, 1.0);
        assert_eq!(input.drive_switch, DriveSwitch::Reverse);
        assert_eq!(input.mode, Mode::Ssr);
        let back = serde_json::to_value(ClientMessage::input(&input)).unwrap();
        assert_eq!(back["switch"], "rev");
        assert_eq!(back["type"], "input");
    }

    #[test]
    fn unknown_switch_rejected() {
        let r: Result<ClientMessage, _> = serde_json::from_str(
            r#"{"type":"input","joystick":{"x":0,"y":0},"switch":"up","mode":"ssr"}"#,
        );
        assert!(r.is_err());
    }

    #[test]
    fn state_frame_shape() {
        let s = reset(&SimConfig::default()).unwrap();
        let v = serde_json::to_value(ServerMessage::State(StateFrame::from(&s))).unwrap();
        assert_eq!(v["type"], "state");
        assert_eq!(v["v"], 1);
        assert_eq!(v["end_effector"]["x"], 0.4);
        assert_eq!(v["ssr"]["heading"], 0.0);
        assert_eq!(v["flags"]["clamped"], false);
        assert_eq!(v["module_bends"].as_array().unwrap().len(), 4);
        assert_eq!(v["mode"], "scm");
        let e = serde_json::to_value(ServerMessage::error("bad")).unwrap();
        assert_eq!(e["type"], "error");
        assert_eq!(e["message"], "bad");
    }
}
