//! Closed-form geometry of a single fringed soft module.
//!
//! A module is a foam cuboid with triangular notches ("fringes") cut into
//! its sides. The fringes occupy a quarter annulus between the inner and
//! outer bending radii; equating the two areas yields the fringe count.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};

/// Relative tolerance for the `R = r + h` and `b = L / N` identities.
pub const IDENTITY_RTOL: f64 = 1e-9;

/// Full geometric parameter set of one module. Lengths in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub length: f64,
    pub width: f64,
    pub thickness: f64,
    pub fringe_base: f64,
    pub fringe_height: f64,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub fringe_count: u32,
    /// Bend angle of the module about its fringes, radians.
    pub turn_angle: f64,
}

impl ModuleSpec {
    /// Builds a module from its independent parameters, deriving
    /// `fringe_base = length / fringe_count` and
    /// `outer_radius = inner_radius + fringe_height`.
    pub fn from_independent(
        length: f64,
        width: f64,
        thickness: f64,
        fringe_height: f64,
        inner_radius: f64,
        fringe_count: u32,
        turn_angle: f64,
    ) -> Result<Self> {
        let spec = ModuleSpec {
            length,
            width,
            thickness,
            fringe_base: fringe_base(length, fringe_count)?,
            fringe_height,
            inner_radius,
            outer_radius: inner_radius + fringe_height,
            fringe_count,
            turn_angle,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks every invariant of the parameter set.
    pub fn validate(&self) -> Result<()> {
        ensure_positive("length", self.length)?;
        ensure_positive("width", self.width)?;
        ensure_positive("thickness", self.thickness)?;
        ensure_positive("fringe_base", self.fringe_base)?;
        ensure_positive("fringe_height", self.fringe_height)?;
        ensure_positive("inner_radius", self.inner_radius)?;
        ensure_positive("outer_radius", self.outer_radius)?;
        if self.fringe_count < 1 {
            return Err(Error::invalid("fringe_count", "must be at least 1"));
        }
        ensure_finite("turn_angle", self.turn_angle)?;
        if !(0.0..=PI).contains(&self.turn_angle) {
            return Err(Error::invalid(
                "turn_angle",
                format!("must lie in [0, pi], got {}", self.turn_angle),
            ));
        }
        let outer = self.inner_radius + self.fringe_height;
        if !close_rel(self.outer_radius, outer) {
            return Err(Error::Inconsistent(format!(
                "outer radius {} != inner radius + fringe height = {}",
                self.outer_radius, outer
            )));
        }
        let base = self.length / f64::from(self.fringe_count);
        if !close_rel(self.fringe_base, base) {
            return Err(Error::Inconsistent(format!(
                "fringe base {} != length / fringe count = {}",
                self.fringe_base, base
            )));
        }
        Ok(())
    }

    /// Fringe count predicted by the area balance for this module's radii
    /// and fringe dimensions. Generally not an integer.
    pub fn area_balance_fringe_count(&self) -> Result<f64> {
        fringe_count(
            self.outer_radius,
            self.inner_radius,
            self.fringe_base,
            self.fringe_height,
        )
    }
}

fn close_rel(a: f64, b: f64) -> bool {
    (a - b).abs() <= IDENTITY_RTOL * a.abs().max(b.abs())
}

/// Chord measured across a bent module and the two bending radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordGeometry {
    pub chord: f64,
    pub radius_1: f64,
    pub radius_2: f64,
}

impl ChordGeometry {
    pub fn new(chord: f64, radius_1: f64, radius_2: f64) -> Result<Self> {
        ensure_finite("chord", chord)?;
        if chord < 0.0 {
            return Err(Error::invalid("chord", "must be >= 0"));
        }
        ensure_positive("radius_1", radius_1)?;
        ensure_positive("radius_2", radius_2)?;
        Ok(ChordGeometry {
            chord,
            radius_1,
            radius_2,
        })
    }

    pub fn equal_radii(chord: f64, radius: f64) -> Result<Self> {
        Self::new(chord, radius, radius)
    }
}

fn check_band(outer: f64, inner: f64) -> Result<()> {
    ensure_positive("inner_radius", inner)?;
    ensure_finite("outer_radius", outer)?;
    if outer <= inner {
        return Err(Error::invalid(
            "outer_radius",
            format!("must exceed inner radius {inner}, got {outer}"),
        ));
    }
    Ok(())
}

/// Area of the quarter annulus between the bending radii, `pi (R^2 - r^2) / 4`.
///
/// The quarter-disc limit `pi R^2 / 4` for `r -> 0` is not accepted: the
/// inner radius must be strictly positive.
pub fn annulus_quarter_area(outer_radius: f64, inner_radius: f64) -> Result<f64> {
    check_band(outer_radius, inner_radius)?;
    Ok(PI * (outer_radius * outer_radius - inner_radius * inner_radius) / 4.0)
}

/// Total area of `count` triangular fringes of base `base` and height `height`.
pub fn triangular_fringe_area(count: u32, base: f64, height: f64) -> Result<f64> {
    if count < 1 {
        return Err(Error::invalid("fringe_count", "must be at least 1"));
    }
    ensure_positive("fringe_base", base)?;
    ensure_positive("fringe_height", height)?;
    Ok(f64::from(count) * base * height / 2.0)
}

/// Real-valued fringe count `pi (R^2 - r^2) / (2 b h)` from equating the
/// annulus and fringe areas. Rounding to an integer is the caller's call.
pub fn fringe_count(outer_radius: f64, inner_radius: f64, base: f64, height: f64) -> Result<f64> {
    check_band(outer_radius, inner_radius)?;
    ensure_positive("fringe_base", base)?;
    ensure_positive("fringe_height", height)?;
    Ok(PI * (outer_radius * outer_radius - inner_radius * inner_radius) / (2.0 * base * height))
}

/// Fringe base `L / N` for a module of length `length` carrying `count` fringes.
pub fn fringe_base(length: f64, count: u32) -> Result<f64> {
    ensure_positive("length", length)?;
    if count < 1 {
        return Err(Error::invalid("fringe_count", "must be at least 1"));
    }
    Ok(length / f64::from(count))
}

/// Bend angle `2 asin(C / 2r)` of a module whose two bending radii agree.
pub fn bend_angle_equal_radii(chord: f64, radius: f64) -> Result<f64> {
    let g = ChordGeometry::equal_radii(chord, radius)?;
    let ratio = g.chord / (2.0 * g.radius_1);
    if ratio > 1.0 {
        return Err(Error::invalid(
            "chord",
            format!("chord {chord} exceeds the diameter {}", 2.0 * radius),
        ));
    }
    Ok(2.0 * ratio.asin())
}

/// Bend angle `2 asin(C / (r1 r2))` for unequal radii, evaluated as printed
/// in the source relation.
///
/// The argument `C / (r1 r2)` has units of 1/m, so the result depends on
/// the unit system; it is only meaningful in meters. With `r1 == r2` it does
/// not reduce to [`bend_angle_equal_radii`].
pub fn bend_angle_unequal_radii(chord: &ChordGeometry) -> Result<f64> {
    let g = ChordGeometry::new(chord.chord, chord.radius_1, chord.radius_2)?;
    let ratio = g.chord / (g.radius_1 * g.radius_2);
    if ratio > 1.0 {
        return Err(Error::invalid(
            "chord",
            format!("asin argument {ratio} lies outside [-1, 1]"),
        ));
    }
    Ok(2.0 * ratio.asin())
}
