//! `softsnake`: design, analysis and teleoperation tools for a modular
//! soft snake robot.

mod design;
mod error;
mod evaluate;
mod io;
mod serve;
mod snake;
mod units;
mod workspace;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use softsnake_client::Client;
use tracing_subscriber::EnvFilter;

use crate::error::{CliError, CliResult};
use crate::units::Units;

const DEFAULT_SERVER: &str = "http://127.0.0.1:8080";

#[derive(Debug, Parser)]
#[command(name = "softsnake", version, about)]
struct Cli {
    /// Take and print meters and radians instead of millimeters and degrees.
    #[arg(long, global = true)]
    si: bool,
    /// Run computations on a softsnake service instead of in-process.
    #[arg(long, global = true, value_name = "URL")]
    server: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Size a bending module: thickness, fringe geometry and count.
    Design(design::DesignArgs),
    /// Sample the reachable workspace of the four-module arm.
    Workspace(workspace::WorkspaceArgs),
    /// Planar snake pose, curvature and link midpoints.
    Snake(snake::SnakeArgs),
    /// Classify locomotion performance.
    Evaluate(evaluate::EvaluateArgs),
    /// Run the teleoperation simulator and HTTP/WebSocket service.
    Serve(serve::ServeArgs),
    /// Print the current simulator state of a running service.
    State,
    /// Send one joystick input to a running service and print state frames.
    Teleop(serve::TeleopArgs),
}

async fn run(cli: Cli) -> CliResult<()> {
    let units = Units { si: cli.si };
    let remote = match &cli.server {
        Some(url) => Some(Client::new(url)?),
        None => None,
    };
    let remote = remote.as_ref();
    let default_client = || -> CliResult<Client> {
        Ok(Client::new(cli.server.as_deref().unwrap_or(DEFAULT_SERVER))?)
    };
    match &cli.command {
        Command::Design(a) => design::run(a, units, remote).await,
        Command::Workspace(a) => workspace::run(a, units, remote).await,
        Command::Snake(a) => snake::run(a, units, remote).await,
        Command::Evaluate(a) => evaluate::run(a, units, remote).await,
        Command::Serve(a) => {
            if cli.server.is_some() {
                return Err(CliError::Validation("--server does not apply to serve".into()));
            }
            serve::serve(a).await
        }
        Command::State => serve::state(&default_client()?).await,
        Command::Teleop(a) => serve::teleop(a, &default_client()?).await,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                e.exit()
            }
            _ => {
                let msg = e.render().to_string();
                let err = CliError::Validation(msg.trim().to_string());
                eprintln!("{}", err.to_json());
                return ExitCode::from(err.exit_code());
            }
        },
    };
    let default_level = if matches!(cli.command, Command::Serve(_)) { "info" } else { "warn" };
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new(default_level)))
        .with_writer(std::io::stderr)
        .init();

    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("{}", CliError::from(e).to_json());
            return ExitCode::from(1);
        }
    };
    match runtime.block_on(run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
