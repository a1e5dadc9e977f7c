//! The single task that owns the simulation.
//!
//! Connection handlers never touch the simulator. They push commands into
//! an ordered queue, which the ticker drains at each tick boundary before
//! stepping. After stepping it publishes an immutable snapshot (watch
//! channel) and one serialized state frame (broadcast channel) shared by
//! every subscriber.

use std::io::Write;
use std::time::Duration;

use axum::extract::ws::Utf8Bytes;
use softsnake_core::teleop::{scm_pose, Mode, SimConfig, Simulator, TeleopInput, TeleopState};
use softsnake_core::wire::{ServerMessage, StateFrame};
use tokio::sync::{broadcast, mpsc, watch};
use tokio::task::JoinHandle;
use tokio::time::MissedTickBehavior;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Command {
    Input(TeleopInput),
    Reset,
}

/// Cloneable handle used by request handlers.
#[derive(Debug, Clone)]
pub struct SimHandle {
    config: SimConfig,
    commands: mpsc::UnboundedSender<Command>,
    snapshots: watch::Receiver<TeleopState>,
    frames: broadcast::Sender<Utf8Bytes>,
}

impl SimHandle {
    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn snapshot(&self) -> TeleopState {
        *self.snapshots.borrow()
    }

    pub fn snapshots(&self) -> watch::Receiver<TeleopState> {
        self.snapshots.clone()
    }

    pub fn subscribe(&self) -> broadcast::Receiver<Utf8Bytes> {
        self.frames.subscribe()
    }

    /// Queues a command for the next tick. Returns `false` once the ticker
    /// has stopped.
    pub fn send(&self, command: Command) -> bool {
        self.commands.send(command).is_ok()
    }
}

/// Trajectory CSV header, one row per tick.
pub const TRAJECTORY_HEADER: &str =
    "t,mode,bend_1,bend_2,bend_3,bend_4,ee_x,ee_y,ee_z,ssr_x,ssr_y,ssr_heading,clamped";

fn trajectory_row(state: &TeleopState) -> String {
    let ee = scm_pose(state).end_effector;
    let b = state.module_bends;
    let p = state.ssr_pose;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        state.sim_time,
        match state.mode {
            Mode::Scm => "scm",
            Mode::Ssr => "ssr",
        },
        b[0],
        b[1],
        b[2],
        b[3],
        ee[0],
        ee[1],
        ee[2],
        p.x,
        p.y,
        p.heading,
        state.flags.clamped
    )
}

fn encode(state: &TeleopState) -> Utf8Bytes {
    let msg = ServerMessage::State(StateFrame::from(state));
    serde_json::to_string(&msg).expect("state frames serialize").into()
}

/// Spawns the ticker. It runs until every [`SimHandle`] is dropped.
pub fn spawn(
    simulator: Simulator,
    mut trajectory: Option<Box<dyn Write + Send>>,
) -> std::io::Result<(SimHandle, JoinHandle<()>)> {
    if let Some(w) = trajectory.as_mut() {
        writeln!(w, "{TRAJECTORY_HEADER}")?;
    }
    let config = *simulator.config();
    let (cmd_tx, mut cmd_rx) = mpsc::unbounded_channel();
    let (snap_tx, snap_rx) = watch::channel(*simulator.state());
    let (frame_tx, _) = broadcast::channel(256);
    let handle = SimHandle {
        config,
        commands: cmd_tx,
        snapshots: snap_rx,
        frames: frame_tx.clone(),
    };

    let period = Duration::from_secs_f64(config.tick_period());
    let task = tokio::spawn(async move {
        let mut sim = simulator;
        let mut interval = tokio::time::interval(period);
        interval.set_missed_tick_behavior(MissedTickBehavior::Delay);
        loop {
            interval.tick().await;
            loop {
                match cmd_rx.try_recv() {
                    Ok(Command::Input(input)) => {
                        if let Err(e) = sim.set_input(input) {
                            tracing::warn!("dropping input: {e}");
                        }
                    }
                    Ok(Command::Reset) => sim.reset(),
                    Err(mpsc::error::TryRecvError::Empty) => break,
                    Err(mpsc::error::TryRecvError::Disconnected) => {
                        if let Some(w) = trajectory.as_mut() {
                            let _ = w.flush();
                        }
                        return;
                    }
                }
            }
            let state = *sim.tick();
            if let Some(w) = trajectory.as_mut() {
                // flushed every tick so the log survives an abrupt exit
                if let Err(e) = writeln!(w, "{}", trajectory_row(&state)).and_then(|()| w.flush()) {
                    tracing::error!("trajectory log disabled: {e}");
                    trajectory = None;
                }
            }
            let _ = snap_tx.send(state);
            // no subscribers is fine
            let _ = frame_tx.send(encode(&state));
        }
    });
    Ok((handle, task))
}

#[cfg(test)]
mod tests {
    use super::*;
    use softsnake_core::teleop::reset;

    #[test]
    fn trajectory_row_matches_header() {
        let s = reset(&SimConfig::default()).unwrap();
        let row = trajectory_row(&s);
        assert_eq!(row.split(',').count(), TRAJECTORY_HEADER.split(',').count());
        assert!(row.starts_with("0,scm,0,0,0,0,0.4,0,0,"));
    }

    #[tokio::test(start_paused = true)]
    async fn commands_apply_at_tick_boundaries() {
        let sim = Simulator::new(SimConfig::default()).unwrap();
        let (handle, _task) = spawn(sim, None).unwrap();
        let mut snaps = handle.snapshots();
        assert!(handle.send(Command::Input(TeleopInput {
            joystick_x: 1.0,
            ..TeleopInput::default()
        })));
        let mut prev = 0.0;
        for _ in 0..10 {
            snaps.changed().await.unwrap();
            let bend = snaps.borrow().module_bends[0];
            assert!(bend > prev);
            prev = bend;
        }
        handle.send(Command::Reset);
        snaps.changed().await.unwrap();
        // reset then one neutral tick
        assert_eq!(snaps.borrow().module_bends, [0.0; 4]);
    }
}
