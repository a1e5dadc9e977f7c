//! Locomotion evaluation ratios and their Low/Medium/High classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};

/// Measured performance of the wheeled snake robot. Lengths in meters,
/// speed in m/s, slope in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotMetrics {
    pub max_speed: f64,
    pub body_length: f64,
    pub body_height: f64,
    pub max_step_height: f64,
    pub max_obstacle_radius: f64,
    pub max_slope_deg: f64,
    pub wheel_radius: f64,
}

impl RobotMetrics {
    /// Values measured on the prototype: 0.37 m/s over a 0.7 m body, a
    /// 30 mm step and a 55 mm semicircular obstacle for a 120 mm tall body,
    /// a 66 degree slope, 35 mm wheels.
    pub fn prototype() -> Self {
        RobotMetrics {
            max_speed: 0.37,
            body_length: 0.7,
            body_height: 0.120,
            max_step_height: 0.030,
            max_obstacle_radius: 0.055,
            max_slope_deg: 66.0,
            wheel_radius: 0.035,
        }
    }

    /// Body dimensions must be positive; measured capabilities may be zero.
    pub fn validate(&self) -> Result<()> {
        ensure_positive("body_length", self.body_length)?;
        ensure_positive("body_height", self.body_height)?;
        for (name, v) in [
            ("max_speed", self.max_speed),
            ("max_step_height", self.max_step_height),
            ("max_obstacle_radius", self.max_obstacle_radius),
            ("wheel_radius", self.wheel_radius),
            ("max_slope_deg", self.max_slope_deg),
        ] {
            ensure_finite(name, v)?;
            if v < 0.0 {
                return Err(Error::invalid(name, "must be >= 0"));
            }
        }
        if self.max_slope_deg >= 90.0 {
            return Err(Error::invalid("max_slope_deg", "must be below 90"));
        }
        Ok(())
    }
}

/// Speed over body length, 1/s.
pub fn speed_ratio(m: &RobotMetrics) -> f64 {
    m.max_speed / m.body_length
}

pub fn step_ratio(m: &RobotMetrics) -> f64 {
    m.max_step_height / m.body_height
}

pub fn obstacle_ratio(m: &RobotMetrics) -> f64 {
    m.max_obstacle_radius / m.body_height
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RangeClass {
    Low,
    Medium,
    High,
}

impl fmt::Display for RangeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RangeClass::Low => "Low",
            RangeClass::Medium => "Medium",
            RangeClass::High => "High",
        })
    }
}

/// Values below `low_upper` are Low, values up to and including
/// `medium_upper` are Medium, anything above is High.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    pub low_upper: f64,
    pub medium_upper: f64,
}

impl Band {
    pub const fn new(low_upper: f64, medium_upper: f64) -> Self {
        Band {
            low_upper,
            medium_upper,
        }
    }

    pub fn classify(&self, value: f64) -> RangeClass {
        if value < self.low_upper {
            RangeClass::Low
        } else if value <= self.medium_upper {
            RangeClass::Medium
        } else {
            RangeClass::High
        }
    }

    fn validate(&self, name: &'static str) -> Result<()> {
        ensure_finite(name, self.low_upper)?;
        ensure_finite(name, self.medium_upper)?;
        if self.low_upper >= self.medium_upper {
            return Err(Error::invalid(
                name,
                format!(
                    "low bound {} must be below medium bound {}",
                    self.low_upper, self.medium_upper
                ),
            ));
        }
        Ok(())
    }
}

/// Classification bounds per criterion.
///
/// The defaults are reconstructions chosen to agree with the published
/// classification of the prototype; they are not sourced values. Override
/// them with a config file when a reference table is available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RangeThresholds {
    pub speed: Band,
    pub step: Band,
    pub obstacle: Band,
    pub slope_deg: Band,
}

impl Default for RangeThresholds {
    fn default() -> Self {
        RangeThresholds {
            speed: Band::new(0.3, 1.0),
            step: Band::new(0.2, 1.0),
            obstacle: Band::new(0.2, 1.0),
            slope_deg: Band::new(30.0, 60.0),
        }
    }
}

impl RangeThresholds {
    pub fn validate(&self) -> Result<()> {
        self.speed.validate("speed thresholds")?;
        self.step.validate("step thresholds")?;
        self.obstacle.validate("obstacle thresholds")?;
        self.slope_deg.validate("slope thresholds")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub value: f64,
    pub class: RangeClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub speed: CriterionOutcome,
    pub step: CriterionOutcome,
    pub obstacle: CriterionOutcome,
    pub slope: CriterionOutcome,
}

pub fn classify(metrics: &RobotMetrics, thresholds: &RangeThresholds) -> Result<EvaluationReport> {
    metrics.validate()?;
    thresholds.validate()?;
    let outcome = |value: f64, band: &Band| CriterionOutcome {
        value,
        class: band.classify(value),
    };
    Ok(EvaluationReport {
        speed: outcome(speed_ratio(metrics), &thresholds.speed),
        step: outcome(step_ratio(metrics), &thresholds.step),
        obstacle: outcome(obstacle_ratio(metrics), &thresholds.obstacle),
        slope: outcome(metrics.max_slope_deg, &thresholds.slope_deg),
    })
}

impl EvaluationReport {
    pub fn rows(&self) -> [(&'static str, String, RangeClass); 4] {
        [
            ("Maximum speed", format!("{:.4} 1/s", self.speed.value), self.speed.class),
            ("Step climbing capability", format!("{:.4}", self.step.value), self.step.class),
            (
                "Obstacle crossing capability",
                format!("{:.4}", self.obstacle.value),
                self.obstacle.class,
            ),
            ("Slope climbing capability", format!("{:.0} deg", self.slope.value), self.slope.class),
        ]
    }
}

impl fmt::Display for EvaluationReport {
    /// Aligned table with Feature, Criteria value and Inference columns.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.rows();
        let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max("Feature".len());
        let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max("Criteria value".len());
        writeln!(f, "{:<w0$}  {:<w1$}  Inference", "Feature", "Criteria value")?;
        for (feature, value, class) in rows {
            writeln!(f, "{feature:<w0$}  {value:<w1$}  {class} Range")?;
        }
        Ok(())
    }
}
