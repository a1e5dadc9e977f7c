use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use softsnake_client::Client;
use softsnake_core::kinematics::{workspace_sample, DhChain, WorkspaceSummary};
use softsnake_core::wire::WorkspaceRequest;

use crate::error::CliResult;
use crate::io;
use crate::units::Units;

#[derive(Debug, Args)]
pub struct WorkspaceArgs {
    /// Samples per joint, endpoints included.
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    /// Lower joint limit (deg, or rad with --si).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta_min: f64,
    /// Upper joint limit (deg, or rad with --si).
    #[arg(long, default_value_t = 90.0, allow_negative_numbers = true)]
    pub theta_max: f64,
    /// Write the point cloud as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write the summary and extents as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

pub async fn run(args: &WorkspaceArgs, units: Units, server: Option<&Client>) -> CliResult<()> {
    let req = WorkspaceRequest {
        steps: args.steps,
        theta_lo: units.angle_in(args.theta_min),
        theta_hi: units.angle_in(args.theta_max),
        include_points: args.csv.is_some(),
    };
    let (summary, points) = match server {
        Some(c) => {
            let resp = c.workspace(&req).await?;
            (resp.summary, resp.points.unwrap_or_default())
        }
        None => {
            let cloud = workspace_sample(&DhChain::default(), req.steps, req.theta_lo, req.theta_hi)?;
            (cloud.summary(), cloud.points)
        }
    };
    if let Some(path) = &args.csv {
        let mut w = csv::Writer::from_writer(io::create(path)?);
        w.write_record(["x_m", "y_m", "z_m"])?;
        for p in &points {
            w.serialize(p)?;
        }
        w.flush()?;
    }
    if let Some(path) = &args.json {
        io::write_json(path, &summary)?;
    }
    print_summary(&summary, units)?;
    Ok(())
}

fn print_summary(s: &WorkspaceSummary, u: Units) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "{} points, {} steps per joint over [{}, {}] {}",
        s.count,
        s.steps,
        u.angle_out(s.joint_min),
        u.angle_out(s.joint_max),
        u.angle_unit()
    )?;
    for (i, axis) in ["x", "y", "z"].iter().enumerate() {
        writeln!(
            out,
            "{axis}: {:.4} .. {:.4} {}",
            u.length_out(s.extents.min[i]),
            u.length_out(s.extents.max[i]),
            u.length_unit()
        )?;
    }
    Ok(())
}
