use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use softsnake_client::Client;
use softsnake_core::optimizer::{design_pipeline, stepped_range, DesignInputs, DesignMode, DesignReport, MaterialLoadParams};

use crate::error::CliResult;
use crate::io;
use crate::units::Units;

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Use the reference module (100 x 90 mm EPE foam, 50 N load).
    #[arg(long, conflicts_with_all = ["length", "width", "force", "density", "max_stress"])]
    pub paper_defaults: bool,
    /// Module length (mm, or m with --si).
    #[arg(long, default_value_t = 100.0)]
    pub length: f64,
    /// Module width (mm, or m with --si).
    #[arg(long, default_value_t = 90.0)]
    pub width: f64,
    /// Applied load, N.
    #[arg(long, default_value_t = 50.0)]
    pub force: f64,
    /// Material density, kg/m^3.
    #[arg(long, default_value_t = 20.0)]
    pub density: f64,
    /// Maximum allowable bending stress, Pa.
    #[arg(long, default_value_t = 160_000.0)]
    pub max_stress: f64,
    /// Inner radius search range `MIN,MAX`.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [25.0, 30.0])]
    pub inner_radius: Vec<f64>,
    /// Fringe height search range `MIN,MAX`.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [30.0, 35.0])]
    pub fringe_height: Vec<f64>,
    /// Grid resolution of both ranges.
    #[arg(long, default_value_t = 1.0)]
    pub grid_step: f64,
    /// Fix the fringe count instead of searching.
    #[arg(long)]
    pub n_fringes: Option<u32>,
    /// Largest fringe count the search tries.
    #[arg(long, default_value_t = 20)]
    pub max_n: u32,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    pub json: bool,
}

impl DesignArgs {
    fn inputs(&self, u: Units) -> CliResult<DesignInputs> {
        let range = |v: &[f64]| stepped_range(u.length_in(v[0]), u.length_in(v[1]), u.length_in(self.grid_step));
        Ok(DesignInputs {
            length: u.length_in(self.length),
            width: u.length_in(self.width),
            material: MaterialLoadParams {
                density: self.density,
                force: self.force,
                max_bending_stress: self.max_stress,
            },
            inner_radii: range(&self.inner_radius)?,
            fringe_heights: range(&self.fringe_height)?,
            max_fringes: self.max_n,
            pinned_fringes: self.n_fringes,
        })
    }
}

pub async fn run(args: &DesignArgs, units: Units, server: Option<&Client>) -> CliResult<()> {
    let inputs = args.inputs(units)?;
    let report = match server {
        Some(c) => c.design(&inputs).await?,
        None => design_pipeline(&inputs)?,
    };
    if let Some(path) = &args.out {
        io::write_json(path, &report)?;
    }
    if args.json {
        io::print_json(&report)?;
    } else {
        print!("{}", table(&report, units));
    }
    for w in warnings(&report) {
        eprintln!("warning: {w}");
    }
    Ok(())
}

pub fn warnings(report: &DesignReport) -> Vec<String> {
    let mut out = Vec::new();
    if !report.target_reached {
        out.push(format!(
            "no fringe count up to {} reaches the {:.1} deg bend target",
            report.iterations.len(),
            report.target_turn_angle.to_degrees()
        ));
    }
    let check = report.fringe_check;
    if check.mismatch {
        out.push(format!(
            "area balance gives {:.4} fringes for the chosen radii, not {}",
            check.area_balance, check.used
        ));
    }
    out
}

/// Parameter table of the final module.
pub fn table(report: &DesignReport, u: Units) -> String {
    let m = &report.module;
    let lu = u.length_unit();
    let len = |v: f64| format!("{:.4}", u.length_out(v));
    let rows = [
        ("Length", "L", len(m.length), lu),
        ("Width", "W", len(m.width), lu),
        ("Thickness", "T", len(m.thickness), lu),
        ("Fringe base", "b", len(m.fringe_base), lu),
        ("Fringe height", "h", len(m.fringe_height), lu),
        ("Inner radius", "r", len(m.inner_radius), lu),
        ("Outer radius", "R", len(m.outer_radius), lu),
        ("Number of fringes", "N", m.fringe_count.to_string(), ""),
        ("Turning angle", "theta", format!("{:.4}", u.angle_out(m.turn_angle)), u.angle_unit()),
    ];
    let w = rows.iter().map(|r| r.2.len()).max().unwrap_or(0).max("Value".len());
    let mut s = String::new();
    let mode = match report.mode {
        DesignMode::Search => "search",
        DesignMode::Pinned => "pinned",
    };
    let _ = writeln!(s, "Module design ({mode}, {} iteration(s))", report.iterations.len());
    let _ = writeln!(s, "{:<18} {:<6} {:>w$}  Unit", "Parameter", "Symbol", "Value");
    for (name, sym, value, unit) in rows {
        let _ = writeln!(s, "{name:<18} {sym:<6} {value:>w$}  {unit}");
    }
    s
}
