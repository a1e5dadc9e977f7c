//! Denavit-Hartenberg forward kinematics of the module chain and
//! workspace sampling over a joint-angle grid.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Length of one module, used as the DH link length.
pub const MODULE_LENGTH: f64 = 0.1;

/// Number of modules (and DH joints) in the arm.
pub const MODULE_COUNT: usize = 4;

/// Upper bound on the number of points a workspace sweep may produce.
pub const MAX_WORKSPACE_POINTS: usize = 50_000_000;

/// One row of a DH table: rotate `theta` about z, translate `d` along z,
/// translate `a` along x, rotate `alpha` about x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DhRow {
    pub theta: f64,
    pub d: f64,
    pub a: f64,
    pub alpha: f64,
}

impl DhRow {
    /// A module joint: link length [`MODULE_LENGTH`], 90 degree twist, no offset.
    pub fn module(theta: f64) -> Self {
        DhRow {
            theta,
            d: 0.0,
            a: MODULE_LENGTH,
            alpha: FRAC_PI_2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("theta", self.theta)?;
        ensure_finite("d", self.d)?;
        ensure_finite("a", self.a)?;
        ensure_finite("alpha", self.alpha)?;
        if self.a < 0.0 {
            return Err(Error::invalid("a", "link length must be >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DhChain {
    pub rows: Vec<DhRow>,
}

impl DhChain {
    /// The four-module arm at the given joint angles.
    pub fn modules(thetas: [f64; MODULE_COUNT]) -> Self {
        DhChain {
            rows: thetas.iter().map(|&t| DhRow::module(t)).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::invalid("chain", "needs at least one row"));
        }
        self.rows.iter().try_for_each(DhRow::validate)
    }

    /// Sum of link lengths: the reach of the fully extended chain.
    pub fn reach(&self) -> f64 {
        self.rows.iter().map(|r| r.a).sum()
    }

    pub fn with_thetas(&self, thetas: &[f64]) -> Result<Self> {
        if thetas.len() != self.rows.len() {
            return Err(Error::invalid(
                "thetas",
                format!("expected {} joint angles, got {}", self.rows.len(), thetas.len()),
            ));
        }
        Ok(DhChain {
            rows: self
                .rows
                .iter()
                .zip(thetas)
                .map(|(row, &theta)| DhRow { theta, ..*row })
                .collect(),
        })
    }
}

impl Default for DhChain {
    fn default() -> Self {
        DhChain::modules([0.0; MODULE_COUNT])
    }
}

/// Rigid transform as a 4x4 homogeneous matrix. Serialized as four rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[[f64; 4]; 4]", from = "[[f64; 4]; 4]")]
pub struct HomogeneousTransform(pub Matrix4<f64>);

impl From<HomogeneousTransform> for [[f64; 4]; 4] {
    fn from(t: HomogeneousTransform) -> Self {
        std::array::from_fn(|i| std::array::from_fn(|j| t.0[(i, j)]))
    }
}

impl From<[[f64; 4]; 4]> for HomogeneousTransform {
    fn from(rows: [[f64; 4]; 4]) -> Self {
        HomogeneousTransform(Matrix4::from_fn(|i, j| rows[i][j]))
    }
}

impl HomogeneousTransform {
    pub fn identity() -> Self {
        HomogeneousTransform(Matrix4::identity())
    }

    pub fn translation(&self) -> Vector3<f64> {
        Vector3::new(self.0[(0, 3)], self.0[(1, 3)], self.0[(2, 3)])
    }

    pub fn rotation(&self) -> Matrix3<f64> {
        self.0.fixed_view::<3, 3>(0, 0).into_owned()
    }

    /// Rotation block orthonormal with determinant +1 and bottom row
    /// `(0, 0, 0, 1)`, within `tol`.
    pub fn is_rigid(&self, tol: f64) -> bool {
        let r = self.rotation();
        let bottom_ok = self.0[(3, 0)].abs() <= tol
            && self.0[(3, 1)].abs() <= tol
            && self.0[(3, 2)].abs() <= tol
            && (self.0[(3, 3)] - 1.0).abs() <= tol;
        let ortho = (r.transpose() * r - Matrix3::identity()).abs().max() <= tol;
        bottom_ok && ortho && (r.determinant() - 1.0).abs() <= tol
    }
}

impl std::ops::Mul for HomogeneousTransform {
    type Output = HomogeneousTransform;

    fn mul(self, rhs: Self) -> Self {
        HomogeneousTransform(self.0 * rhs.0)
    }
}

/// `(sin, cos)` with exact values at integer multiples of a quarter turn,
/// so axis-aligned poses carry no `6e-17` residue.
pub(crate) fn sin_cos(angle: f64) -> (f64, f64) {
    let quarters = angle / FRAC_PI_2;
    let k = quarters.round();
    if (quarters - k).abs() < 1e-12 {
        match (k as i64).rem_euclid(4) {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        }
    } else {
        angle.sin_cos()
    }
}

/// Homogeneous transform of a single DH row.
pub fn dh_transform(row: &DhRow) -> HomogeneousTransform {
    let (st, ct) = sin_cos(row.theta);
    let (sa, ca) = sin_cos(row.alpha);
    #[rustfmt::skip]
    let m = Matrix4::new(
        ct, -st * ca,  st * sa, row.a * ct,
        st,  ct * ca, -ct * sa, row.a * st,
        0.0,      sa,       ca, row.d,
        0.0,     0.0,      0.0, 1.0,
    );
    HomogeneousTransform(m)
}

/// Base-to-end-effector transform: the ordered product of the row transforms.
pub fn forward_kinematics(chain: &DhChain) -> HomogeneousTransform {
    chain
        .rows
        .iter()
        .fold(HomogeneousTransform::identity(), |acc, row| acc * dh_transform(row))
}

/// Cumulative frame after each joint, base frame excluded.
pub fn joint_frames(chain: &DhChain) -> Vec<HomogeneousTransform> {
    chain
        .rows
        .iter()
        .scan(HomogeneousTransform::identity(), |acc, row| {
            *acc = *acc * dh_transform(row);
            Some(*acc)
        })
        .collect()
}

/// `n` evenly spaced values covering `[lo, hi]`, both ends included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let span = hi - lo;
            let last = (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| lo + span * i as f64 / last).collect();
            v[n - 1] = hi;
            v
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extents {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

/// End-effector positions over a joint grid, in odometer order with the
/// first joint varying slowest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkspaceCloud {
    pub points: Vec<[f64; 3]>,
    pub steps: usize,
    pub joint_min: f64,
    pub joint_max: f64,
    pub extents: Extents,
}

/// Compact description of a cloud, without the points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkspaceSummary {
    pub count: usize,
    pub steps: usize,
    pub joint_min: f64,
    pub joint_max: f64,
    pub extents: Extents,
}

impl WorkspaceCloud {
    pub fn summary(&self) -> WorkspaceSummary {
        WorkspaceSummary {
            count: self.points.len(),
            steps: self.steps,
            joint_min: self.joint_min,
            joint_max: self.joint_max,
            extents: self.extents,
        }
    }
}

/// Sweeps every joint of `template` over `steps` values in
/// `[theta_lo, theta_hi]` and collects the end-effector positions.
pub fn workspace_sample(template: &DhChain, steps: usize, theta_lo: f64, theta_hi: f64) -> Result<WorkspaceCloud> {
    template.validate()?;
    if steps < 2 {
        return Err(Error::invalid("steps", format!("must be at least 2, got {steps}")));
    }
    ensure_finite("theta_lo", theta_lo)?;
    ensure_finite("theta_hi", theta_hi)?;
    if theta_hi < theta_lo {
        return Err(Error::invalid("theta_hi", "must not be below theta_lo"));
    }
    let joints = template.rows.len();
    let total = u32::try_from(joints)
        .ok()
        .and_then(|j| steps.checked_pow(j))
        .filter(|&n| n <= MAX_WORKSPACE_POINTS)
        .ok_or_else(|| Error::invalid("steps", format!("{steps}^{joints} points exceeds the sweep limit")))?;

    let grid = linspace(theta_lo, theta_hi, steps);
    // Per-joint transforms depend only on the grid value; compute them once.
    let tables: Vec<Vec<Matrix4<f64>>> = template
        .rows
        .iter()
        .map(|row| grid.iter().map(|&theta| dh_transform(&DhRow { theta, ..*row }).0).collect())
        .collect();

    let mut points = Vec::with_capacity(total);
    let mut min = [f64::INFINITY; 3];
    let mut max = [f64::NEG_INFINITY; 3];
    let mut index = vec![0usize; joints];
    // prefix[k] is the product of the first k + 1 joint transforms; after an
    // odometer increment only the entries from the lowest changed joint on
    // are stale.
    let mut prefix = vec![Matrix4::identity(); joints];
    let mut stale_from = 0;
    for _ in 0..total {
        for k in stale_from..joints {
            let table = &tables[k][index[k]];
            prefix[k] = if k == 0 { *table } else { prefix[k - 1] * table };
        }
        let m = &prefix[joints - 1];
        let p = [m[(0, 3)], m[(1, 3)], m[(2, 3)]];
        for k in 0..3 {
            min[k] = min[k].min(p[k]);
            max[k] = max[k].max(p[k]);
        }
        points.push(p);
        // odometer increment, last joint fastest
        stale_from = joints;
        for (k, slot) in index.iter_mut().enumerate().rev() {
            stale_from = k;
            *slot += 1;
            if *slot < steps {
                break;
            }
            *slot = 0;
        }
    }

    Ok(WorkspaceCloud {
        points,
        steps,
        joint_min: theta_lo,
        joint_max: theta_hi,
        extents: Extents { min, max },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn twist_only_row() {
        let t = dh_transform(&DhRow {
            theta: 0.0,
            d: 0.0,
            a: 0.1,
            alpha: FRAC_PI_2,
        });
        #[rustfmt::skip]
        let expected = Matrix4::new(
            1.0, 0.0, 0.0, 0.1,
            0.0, 0.0, -1.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
        );
        assert_eq!(t.0, expected);
    }

    #[test]
    fn transform_serializes_row_major() {
        let t = dh_transform(&DhRow::module(0.0));
        let v = serde_json::to_value(t).unwrap();
        assert_eq!(v[0][3], 0.1);
        assert_eq!(v[1][2], -1.0);
        let back: HomogeneousTransform = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn zero_row_is_identity() {
        let t = dh_transform(&DhRow {
            theta: 0.0,
            d: 0.0,
            a: 0.0,
            alpha: 0.0,
        });
        assert_eq!(t, HomogeneousTransform::identity());
    }

    #[test]
    fn rotated_row_position() {
        let t = dh_transform(&DhRow::module(FRAC_PI_2));
        assert_relative_eq!(t.translation(), Vector3::new(0.0, 0.1, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn straight_arm_reaches_along_x() {
        let p = forward_kinematics(&DhChain::modules([0.0; 4])).translation();
        assert_relative_eq!(p, Vector3::new(0.4, 0.0, 0.0), epsilon = 1e-15);
        assert_relative_eq!(p.norm(), DhChain::default().reach(), max_relative = 1e-15);
    }

    #[test]
    fn base_yaw_swings_arm_to_y() {
        let p = forward_kinematics(&DhChain::modules([FRAC_PI_2, 0.0, 0.0, 0.0])).translation();
        assert_relative_eq!(p, Vector3::new(0.0, 0.4, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn second_joint_lifts_to_z() {
        let p = forward_kinematics(&DhChain::modules([0.0, FRAC_PI_2, 0.0, 0.0])).translation();
        assert_relative_eq!(p.z, 0.3, epsilon = 1e-15);
    }

    #[test]
    fn frames_end_at_forward_kinematics() {
        let chain = DhChain::modules([0.3, -0.2, 1.1, 0.7]);
        let frames = joint_frames(&chain);
        assert_eq!(frames.len(), 4);
        assert_relative_eq!(frames[3].0, forward_kinematics(&chain).0, epsilon = 1e-15);
        assert!(frames.iter().all(|f| f.is_rigid(1e-9)));
    }

    #[test]
    fn exact_quarter_turn_trig() {
        assert_eq!(sin_cos(0.0), (0.0, 1.0));
        assert_eq!(sin_cos(FRAC_PI_2), (1.0, 0.0));
        assert_eq!(sin_cos(PI), (0.0, -1.0));
        assert_eq!(sin_cos(-FRAC_PI_2), (-1.0, 0.0));
        assert_eq!(sin_cos(90f64.to_radians()), (1.0, 0.0));
        let (s, c) = sin_cos(0.3);
        assert_eq!((s, c), 0.3f64.sin_cos());
    }

    #[test]
    fn linspace_includes_both_ends() {
        let g = linspace(0.0, FRAC_PI_2, 20);
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[19], FRAC_PI_2);
        assert_relative_eq!(g[1], FRAC_PI_2 / 19.0, max_relative = 1e-15);
    }

    #[test]
    fn two_step_sweep_has_sixteen_points() {
        let cloud = workspace_sample(&DhChain::default(), 2, 0.0, FRAC_PI_2).unwrap();
        assert_eq!(cloud.points.len(), 16);
        assert_eq!(cloud.points[0], [0.4, 0.0, 0.0]);
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        assert!(workspace_sample(&DhChain::default(), 1, 0.0, 1.0).is_err());
        assert!(workspace_sample(&DhChain::default(), 5, 1.0, 0.0).is_err());
        assert!(workspace_sample(&DhChain::default(), 1000, 0.0, 1.0).is_err());
        assert!(workspace_sample(&DhChain { rows: vec![] }, 5, 0.0, 1.0).is_err());
    }

    #[test]
    fn base_joint_sweep_traces_an_arc() {
        let chain = DhChain {
            rows: vec![DhRow::module(0.0)],
        };
        // a single yawing link of the full arm length
        let chain = DhChain {
            rows: vec![DhRow { a: 0.4, ..chain.rows[0] }],
        };
        let cloud = workspace_sample(&chain, 25, 0.0, FRAC_PI_2).unwrap();
        for p in &cloud.points {
            assert_relative_eq!((p[0] * p[0] + p[1] * p[1]).sqrt(), 0.4, max_relative = 1e-12);
            assert_eq!(p[2], 0.0);
        }
    }

    #[test]
    fn invalid_rows_rejected() {
        let mut chain = DhChain::default();
        chain.rows[2].a = -0.1;
        assert!(chain.validate().is_err());
        chain.rows[2].a = 0.1;
        chain.rows[1].theta = f64::NAN;
        assert!(chain.validate().is_err());
        assert!(DhChain::default().with_thetas(&[0.0; 3]).is_err());
    }
}
