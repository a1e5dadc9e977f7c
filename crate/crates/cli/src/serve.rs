use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;

use clap::Args;
use softsnake_client::Client;
use softsnake_core::teleop::{DriveSwitch, Mode, SimConfig, TeleopInput};
use softsnake_core::wire::ServerMessage;
use softsnake_service::ServiceOptions;

use crate::error::{CliError, CliResult};
use crate::io;

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub host: IpAddr,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Simulator config (TOML or JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory of built UI assets served at `/`.
    #[arg(long)]
    pub ui_dir: Option<PathBuf>,
    /// Append one CSV row per tick to this file.
    #[arg(long)]
    pub log_trajectory: Option<PathBuf>,
}

pub async fn serve(args: &ServeArgs) -> CliResult<()> {
    let sim = match &args.config {
        Some(p) => io::load::<SimConfig>(p)?,
        None => SimConfig::default(),
    };
    sim.validate()?;
    if let Some(dir) = &args.ui_dir {
        if !dir.is_dir() {
            return Err(CliError::Validation(format!("{} is not a directory", dir.display())));
        }
    }
    let trajectory = match &args.log_trajectory {
        Some(p) => Some(Box::new(io::create(p)?) as Box<dyn std::io::Write + Send>),
        None => None,
    };
    let options = ServiceOptions {
        sim,
        ui_dir: args.ui_dir.clone(),
    };
    let running = softsnake_service::start(SocketAddr::new(args.host, args.port), options, trajectory).await?;
    tokio::select! {
        r = running.server => match r {
            Ok(Ok(())) => Ok(()),
            Ok(Err(e)) => Err(e.into()),
            Err(e) => Err(CliError::Runtime(e.to_string())),
        },
        r = tokio::signal::ctrl_c() => {
            r?;
            eprintln!("shutting down");
            Ok(())
        }
    }
}

pub async fn state(client: &Client) -> CliResult<()> {
    io::print_json(&client.state().await?)
}

#[derive(Debug, Args)]
pub struct TeleopArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub joystick_x: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub joystick_y: f64,
    /// Drive switch: fwd, off or rev.
    #[arg(long = "switch", default_value = "off", value_parser = parse_wire::<DriveSwitch>)]
    pub drive_switch: DriveSwitch,
    /// scm or ssr.
    #[arg(long, default_value = "scm", value_parser = parse_wire::<Mode>)]
    pub mode: Mode,
    /// State frames to print before disconnecting.
    #[arg(long, default_value_t = 50)]
    pub frames: usize,
}

fn parse_wire<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

/// Sends one input and prints the following state frames as JSON lines.
pub async fn teleop(args: &TeleopArgs, client: &Client) -> CliResult<()> {
    let mut session = client.teleop().await?;
    let input = TeleopInput {
        joystick_x: args.joystick_x,
        joystick_y: args.joystick_y,
        drive_switch: args.drive_switch,
        mode: args.mode,
    }
    .sanitized()?;
    session.send_input(&input).await?;
    let mut seen = 0;
    while seen < args.frames {
        match session.next_message().await? {
            Some(msg @ ServerMessage::State(_)) => {
                println!("{}", serde_json::to_string(&msg)?);
                seen += 1;
            }
            Some(ServerMessage::Error { message, .. }) => return Err(CliError::Validation(message)),
            None => return Err(CliError::Runtime("server closed the connection".into())),
        }
    }
    session.close().await?;
    Ok(())
}
