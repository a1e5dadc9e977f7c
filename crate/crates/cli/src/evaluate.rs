use std::path::PathBuf;

use clap::Args;
use softsnake_client::Client;
use softsnake_core::evaluation::{classify, RangeThresholds, RobotMetrics};
use softsnake_core::wire::EvaluateRequest;

use crate::error::CliResult;
use crate::io;
use crate::units::Units;

/// Metric flags override the metrics file, which overrides the prototype
/// measurements.
#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Metrics file (TOML or JSON, SI units).
    #[arg(long)]
    pub metrics: Option<PathBuf>,
    /// Classification thresholds file (TOML or JSON).
    #[arg(long)]
    pub thresholds: Option<PathBuf>,
    /// Top speed (mm/s, or m/s with --si).
    #[arg(long)]
    pub max_speed: Option<f64>,
    #[arg(long)]
    pub body_length: Option<f64>,
    #[arg(long)]
    pub body_height: Option<f64>,
    #[arg(long)]
    pub step_height: Option<f64>,
    #[arg(long)]
    pub obstacle_radius: Option<f64>,
    #[arg(long)]
    pub wheel_radius: Option<f64>,
    /// Steepest slope climbed (deg, or rad with --si).
    #[arg(long)]
    pub slope: Option<f64>,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    pub json: bool,
}

impl EvaluateArgs {
    fn request(&self, u: Units) -> CliResult<EvaluateRequest> {
        let mut m = match &self.metrics {
            Some(p) => io::load::<RobotMetrics>(p)?,
            None => RobotMetrics::prototype(),
        };
        let set = |dst: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *dst = u.length_in(v);
            }
        };
        set(&mut m.max_speed, self.max_speed);
        set(&mut m.body_length, self.body_length);
        set(&mut m.body_height, self.body_height);
        set(&mut m.max_step_height, self.step_height);
        set(&mut m.max_obstacle_radius, self.obstacle_radius);
        set(&mut m.wheel_radius, self.wheel_radius);
        if let Some(s) = self.slope {
            m.max_slope_deg = if u.si { s.to_degrees() } else { s };
        }
        let thresholds = match &self.thresholds {
            Some(p) => io::load::<RangeThresholds>(p)?,
            None => RangeThresholds::default(),
        };
        Ok(EvaluateRequest { metrics: m, thresholds })
    }
}

pub async fn run(args: &EvaluateArgs, units: Units, server: Option<&Client>) -> CliResult<()> {
    let req = args.request(units)?;
    let report = match server {
        Some(c) => c.evaluate(&req).await?,
        None => classify(&req.metrics, &req.thresholds)?,
    };
    if let Some(path) = &args.out {
        io::write_json(path, &report)?;
    }
    if args.json {
        io::print_json(&report)?;
    } else {
        print!("{report}");
    }
    Ok(())
}
