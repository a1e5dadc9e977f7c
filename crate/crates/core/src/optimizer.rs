//! Optimal module design: thickness by geometric programming, bending radii
//! and fringe height by Grey Relational Analysis, and an outer loop over the
//! fringe count.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::geometry::{self, ModuleSpec};

/// Material and load inputs of the thickness problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MaterialLoadParams {
    /// kg/m^3
    pub density: f64,
    /// N
    pub force: f64,
    /// Maximum allowable bending stress, N/m^2.
    pub max_bending_stress: f64,
}

impl MaterialLoadParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("density", self.density)?;
        ensure_positive("force", self.force)?;
        ensure_positive("max_bending_stress", self.max_bending_stress)
    }
}

impl Default for MaterialLoadParams {
    /// EPE foam module under a 50 N load.
    fn default() -> Self {
        MaterialLoadParams {
            density: 20.0,
            force: 50.0,
            max_bending_stress: 160_000.0,
        }
    }
}

/// Bending-stress constraint value `6 F L / (sigma W T^2)`; feasible when <= 1.
pub fn stress_constraint(length: f64, width: f64, thickness: f64, params: &MaterialLoadParams) -> f64 {
    6.0 * params.force * length / (params.max_bending_stress * width * thickness * thickness)
}

/// Objective `D L W T` minimized by the thickness problem.
pub fn thickness_objective(length: f64, width: f64, thickness: f64, params: &MaterialLoadParams) -> f64 {
    params.density * length * width * thickness
}

fn check_thickness_inputs(length: f64, width: f64, params: &MaterialLoadParams) -> Result<()> {
    ensure_positive("length", length)?;
    ensure_positive("width", width)?;
    params.validate()
}

/// Minimum-mass thickness subject to the bending-stress constraint.
///
/// The objective is increasing in `T` and the constraint decreasing, so the
/// optimum makes the constraint active: `T* = sqrt(6 F L / (sigma W))`.
pub fn optimal_thickness(length: f64, width: f64, params: &MaterialLoadParams) -> Result<f64> {
    check_thickness_inputs(length, width, params)?;
    Ok((6.0 * params.force * length / (params.max_bending_stress * width)).sqrt())
}

/// Same problem solved numerically: bisection in log-space on the
/// monotone constraint, returning the smallest feasible thickness.
pub fn optimal_thickness_bisection(length: f64, width: f64, params: &MaterialLoadParams) -> Result<f64> {
    check_thickness_inputs(length, width, params)?;
    let feasible = |t: f64| stress_constraint(length, width, t, params) <= 1.0;

    let mut hi = 1.0_f64;
    while !feasible(hi) {
        hi *= 2.0;
    }
    let mut lo = hi;
    while feasible(lo) {
        lo /= 2.0;
    }
    // lo infeasible, hi feasible
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Grid searched by the Grey Relational Analysis. Lengths in meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraSearchSpace {
    pub inner_radii: Vec<f64>,
    pub fringe_heights: Vec<f64>,
    pub fringe_base: f64,
    pub fringe_count: u32,
}

/// Inclusive, evenly stepped values from `lo` to `hi`.
pub fn stepped_range(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    ensure_positive("range start", lo)?;
    ensure_positive("range step", step)?;
    if hi < lo {
        return Err(Error::invalid("range end", format!("{hi} is below start {lo}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

fn check_range(name: &'static str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::invalid(name, "must not be empty"));
    }
    for v in values {
        ensure_positive(name, *v)?;
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(name, "must be strictly increasing"));
    }
    Ok(())
}

impl GraSearchSpace {
    pub fn validate(&self) -> Result<()> {
        check_range("inner_radii", &self.inner_radii)?;
        check_range("fringe_heights", &self.fringe_heights)?;
        ensure_positive("fringe_base", self.fringe_base)?;
        if self.fringe_count < 1 {
            return Err(Error::invalid("fringe_count", "must be at least 1"));
        }
        Ok(())
    }
}

/// Outcome of a Grey Relational Analysis over the `(r, h)` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraResult {
    /// `fitness[i][j]` for inner radius `i` and fringe height `j`.
    pub fitness: Surface,
    /// Grades in [0, 1], same indexing as `fitness`.
    pub grades: Surface,
    pub optimal_index: (usize, usize),
    pub optimal_inner_radius: f64,
    pub optimal_fringe_height: f64,
    pub optimal_outer_radius: f64,
}

/// Fitness of a grid cell: the area-balance fringe count with `R = r + h`.
/// Algebraically equal to `pi (h + 2 r) / (2 b)`. `_count` is accepted to
/// match the search inputs and does not enter the value.
pub fn gra_fitness(inner_radius: f64, fringe_height: f64, base: f64, _count: u32) -> Result<f64> {
    geometry::fringe_count(inner_radius + fringe_height, inner_radius, base, fringe_height)
}

/// Row-major surface indexed by `(inner radius, fringe height)`.
pub type Surface = Vec<Vec<f64>>;

/// Normalizes a fitness surface to grades `(max - f) / (max - min)` and
/// returns the grades with the index of the best cell.
///
/// Lower fitness is better. Ties go to the smallest `(i, j)`. A flat surface
/// grades every cell 1 and selects `(0, 0)`.
pub fn grade_surface(fitness: &[Vec<f64>]) -> Result<(Surface, (usize, usize))> {
    if fitness.is_empty() || fitness[0].is_empty() {
        return Err(Error::invalid("fitness", "surface must not be empty"));
    }
    let cols = fitness[0].len();
    if fitness.iter().any(|row| row.len() != cols) {
        return Err(Error::invalid("fitness", "rows must have equal length"));
    }
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &f in fitness.iter().flatten() {
        if !f.is_finite() {
            return Err(Error::NonFinite("fitness"));
        }
        min = min.min(f);
        max = max.max(f);
    }
    let span = max - min;
    let grades: Vec<Vec<f64>> = fitness
        .iter()
        .map(|row| {
            row.iter()
                .map(|&f| if span > 0.0 { (max - f) / span } else { 1.0 })
                .collect()
        })
        .collect();

    let mut best = (0, 0);
    for (i, row) in grades.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            if g > grades[best.0][best.1] {
                best = (i, j);
            }
        }
    }
    Ok((grades, best))
}

/// Evaluates the fitness on the full grid and picks the maximum-grade cell.
pub fn grey_relational_analysis(space: &GraSearchSpace) -> Result<GraResult> {
    space.validate()?;
    let fitness = space
        .inner_radii
        .iter()
        .map(|&r| {
            space
                .fringe_heights
                .iter()
                .map(|&h| gra_fitness(r, h, space.fringe_base, space.fringe_count))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let (grades, (i, j)) = grade_surface(&fitness)?;
    let r = space.inner_radii[i];
    let h = space.fringe_heights[j];
    Ok(GraResult {
        fitness,
        grades,
        optimal_index: (i, j),
        optimal_inner_radius: r,
        optimal_fringe_height: h,
        optimal_outer_radius: r + h,
    })
}

/// Largest angle one triangular notch can close by: its apex angle
/// `2 atan(b / (2 h))`.
pub fn fringe_closing_angle(base: f64, height: f64) -> Result<f64> {
    ensure_positive("fringe_base", base)?;
    ensure_positive("fringe_height", height)?;
    Ok(2.0 * (base / (2.0 * height)).atan())
}

/// Module bend limit when all `count` notches close fully, capped at pi.
pub fn module_turn_limit(count: u32, base: f64, height: f64) -> Result<f64> {
    Ok((f64::from(count) * fringe_closing_angle(base, height)?).min(PI))
}

/// Inputs of the full design loop. Lengths in meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DesignInputs {
    pub length: f64,
    pub width: f64,
    pub material: MaterialLoadParams,
    pub inner_radii: Vec<f64>,
    pub fringe_heights: Vec<f64>,
    /// Upper bound on the fringe count tried by the loop.
    pub max_fringes: u32,
    /// Skip the loop and use this fringe count.
    pub pinned_fringes: Option<u32>,
}

impl Default for DesignInputs {
    /// Reference design: 100 x 90 mm module, r in 25..=30 mm and
    /// h in 30..=35 mm at 1 mm resolution.
    fn default() -> Self {
        DesignInputs {
            length: 0.100,
            width: 0.090,
            material: MaterialLoadParams::default(),
            inner_radii: stepped_range(0.025, 0.030, 0.001).expect("static range"),
            fringe_heights: stepped_range(0.030, 0.035, 0.001).expect("static range"),
            max_fringes: 20,
            pinned_fringes: None,
        }
    }
}

/// One pass of the design loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignIteration {
    pub fringe_count: u32,
    pub fringe_base: f64,
    pub inner_radius: f64,
    pub fringe_height: f64,
    pub turn_angle: f64,
}

/// Comparison between the integer fringe count used and the real value the
/// area balance predicts for the final radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeCountCheck {
    pub used: u32,
    pub area_balance: f64,
    /// `true` when `area_balance` does not round to `used`.
    pub mismatch: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignMode {
    /// Fringe count increased from 1 until the bend target is met.
    Search,
    /// Fringe count fixed by the caller.
    Pinned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub mode: DesignMode,
    pub module: ModuleSpec,
    /// `D L W T` at the optimal thickness.
    pub thickness_objective: f64,
    pub gra: GraResult,
    pub iterations: Vec<DesignIteration>,
    /// Bend target used by the loop, radians.
    pub target_turn_angle: f64,
    /// `false` means the loop hit its fringe limit without reaching the target.
    pub target_reached: bool,
    pub fringe_check: FringeCountCheck,
}

/// Bend target per module: a quarter turn, so two same-axis modules give a
/// half turn of the whole arm.
pub const TARGET_TURN_ANGLE: f64 = FRAC_PI_2;

/// Runs the design loop.
///
/// For each fringe count `N = 1, 2, ...` the fringe base is `L / N`; the
/// thickness and `(r, h)` are re-optimized and the module bend limit is
/// evaluated with [`module_turn_limit`]. The loop stops at the first `N`
/// whose limit reaches [`TARGET_TURN_ANGLE`]. When `pinned_fringes` is set
/// only that count is evaluated.
pub fn design_pipeline(inputs: &DesignInputs) -> Result<DesignReport> {
    if inputs.max_fringes < 1 {
        return Err(Error::invalid("max_fringes", "must be at least 1"));
    }
    if inputs.pinned_fringes == Some(0) {
        return Err(Error::invalid("pinned_fringes", "must be at least 1"));
    }
    let thickness = optimal_thickness(inputs.length, inputs.width, &inputs.material)?;

    let counts: Vec<u32> = match inputs.pinned_fringes {
        Some(n) => vec![n],
        None => (1..=inputs.max_fringes).collect(),
    };

    let mut iterations = Vec::new();
    let mut last_gra = None;
    for n in counts {
        let base = geometry::fringe_base(inputs.length, n)?;
        let gra = grey_relational_analysis(&GraSearchSpace {
            inner_radii: inputs.inner_radii.clone(),
            fringe_heights: inputs.fringe_heights.clone(),
            fringe_base: base,
            fringe_count: n,
        })?;
        let turn_angle = module_turn_limit(n, base, gra.optimal_fringe_height)?;
        iterations.push(DesignIteration {
            fringe_count: n,
            fringe_base: base,
            inner_radius: gra.optimal_inner_radius,
            fringe_height: gra.optimal_fringe_height,
            turn_angle,
        });
        last_gra = Some(gra);
        if turn_angle >= TARGET_TURN_ANGLE {
            break;
        }
    }

    // The bend limit grows with N, so the last iteration is also the best.
    let last = *iterations.last().expect("at least one iteration");
    let gra = last_gra.expect("at least one iteration");
    let module = ModuleSpec::from_independent(
        inputs.length,
        inputs.width,
        thickness,
        last.fringe_height,
        last.inner_radius,
        last.fringe_count,
        last.turn_angle,
    )?;
    let area_balance = module.area_balance_fringe_count()?;
    Ok(DesignReport {
        mode: if inputs.pinned_fringes.is_some() {
            DesignMode::Pinned
        } else {
            DesignMode::Search
        },
        module,
        thickness_objective: thickness_objective(inputs.length, inputs.width, thickness, &inputs.material),
        gra,
        iterations,
        target_turn_angle: TARGET_TURN_ANGLE,
        target_reached: last.turn_angle >= TARGET_TURN_ANGLE,
        fringe_check: FringeCountCheck {
            used: last.fringe_count,
            area_balance,
            mismatch: area_balance.round() != f64::from(last.fringe_count),
        },
    })
}
