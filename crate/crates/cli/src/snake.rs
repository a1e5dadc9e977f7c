use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use softsnake_client::Client;
use softsnake_core::snake::{planar_pose, scratch, snake_report, SnakeReport};
use softsnake_core::wire::SnakeRequest;

use crate::error::CliResult;
use crate::io;
use crate::units::Units;

#[derive(Debug, Args)]
pub struct SnakeArgs {
    /// Relative joint angles, comma separated (deg, or rad with --si).
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
    pub angles: Vec<f64>,
    /// Link lengths, comma separated (mm, or m with --si). Defaults to
    /// 100 mm per link.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub lengths: Option<Vec<f64>>,
    /// Write the pose as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write one row per joint as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Dump intermediate plotting quantities to stderr.
    #[arg(long)]
    pub debug: bool,
}

pub async fn run(args: &SnakeArgs, units: Units, server: Option<&Client>) -> CliResult<()> {
    let angles: Vec<f64> = args.angles.iter().map(|a| units.angle_in(*a)).collect();
    let lengths: Vec<f64> = match &args.lengths {
        Some(l) => l.iter().map(|v| units.length_in(*v)).collect(),
        None => vec![softsnake_core::kinematics::MODULE_LENGTH; angles.len()],
    };
    let report = match server {
        Some(c) => {
            c.snake(&SnakeRequest {
                joint_angles: angles.clone(),
                link_lengths: lengths.clone(),
            })
            .await?
        }
        None => snake_report(&angles, &lengths)?,
    };
    if args.debug {
        let trace = scratch::trace(&planar_pose(&angles, &lengths)?);
        eprintln!("{}", serde_json::to_string_pretty(&trace)?);
    }
    if let Some(path) = &args.json {
        io::write_json(path, &report)?;
    }
    if let Some(path) = &args.csv {
        let mut w = csv::Writer::from_writer(io::create(path)?);
        w.write_record(["joint", "x_m", "y_m"])?;
        for (i, p) in report.joints.iter().enumerate() {
            w.serialize((i, p.x, p.y))?;
        }
        w.flush()?;
    }
    print_report(&report, units)
}

fn print_report(r: &SnakeReport, u: Units) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    let lu = u.length_unit();
    writeln!(out, "joint  x ({lu})  y ({lu})")?;
    for (i, p) in r.joints.iter().enumerate() {
        writeln!(out, "{i:>5}  {:.4}  {:.4}", u.length_out(p.x), u.length_out(p.y))?;
    }
    let ku = if u.si { "1/m" } else { "1/mm" };
    let k: Vec<String> = r
        .curvatures
        .iter()
        .map(|k| format!("{:.6}", if u.si { *k } else { k / 1000.0 }))
        .collect();
    writeln!(out, "curvature ({ku}): {}", k.join(", "))?;
    Ok(())
}
