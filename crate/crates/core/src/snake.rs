//! Planar kinematics of the chain in snake configuration.
//!
//! Joint angles are relative: each is the turn between successive links.
//! Link `i` points along the cumulative angle of joints `0..=i`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarChainPose {
    pub joint_angles: Vec<f64>,
    pub link_lengths: Vec<f64>,
    /// Base at the origin followed by the tip of each link.
    pub joint_positions: Vec<Point2>,
    pub cumulative_angles: Vec<f64>,
}

impl PlanarChainPose {
    pub fn end_point(&self) -> Point2 {
        *self.joint_positions.last().expect("pose has a base point")
    }
}

/// Per-link curvature `(theta_i - theta_{i-1}) / l_i` with `theta_0 = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureProfile {
    pub curvatures: Vec<f64>,
}

fn check_chain(joint_angles: &[f64], link_lengths: &[f64]) -> Result<()> {
    if joint_angles.is_empty() {
        return Err(Error::invalid("joint_angles", "need at least one joint"));
    }
    if joint_angles.len() != link_lengths.len() {
        return Err(Error::invalid(
            "link_lengths",
            format!(
                "{} lengths for {} joint angles",
                link_lengths.len(),
                joint_angles.len()
            ),
        ));
    }
    for &a in joint_angles {
        ensure_finite("joint angle", a)?;
    }
    for &l in link_lengths {
        ensure_positive("link length", l)?;
    }
    Ok(())
}

/// Joint positions of the planar chain.
pub fn planar_pose(joint_angles: &[f64], link_lengths: &[f64]) -> Result<PlanarChainPose> {
    check_chain(joint_angles, link_lengths)?;
    let cumulative_angles: Vec<f64> = joint_angles
        .iter()
        .scan(0.0, |sum, &a| {
            *sum += a;
            Some(*sum)
        })
        .collect();

    let mut joint_positions = Vec::with_capacity(link_lengths.len() + 1);
    let mut p = Point2::ORIGIN;
    joint_positions.push(p);
    for (&heading, &len) in cumulative_angles.iter().zip(link_lengths) {
        let (s, c) = heading.sin_cos();
        p = Point2 {
            x: p.x + len * c,
            y: p.y + len * s,
        };
        joint_positions.push(p);
    }

    Ok(PlanarChainPose {
        joint_angles: joint_angles.to_vec(),
        link_lengths: link_lengths.to_vec(),
        joint_positions,
        cumulative_angles,
    })
}

pub fn curvature_profile(joint_angles: &[f64], link_lengths: &[f64]) -> Result<CurvatureProfile> {
    check_chain(joint_angles, link_lengths)?;
    let curvatures = joint_angles
        .iter()
        .zip(link_lengths)
        .enumerate()
        .map(|(i, (&theta, &len))| {
            let prev = if i == 0 { 0.0 } else { joint_angles[i - 1] };
            (theta - prev) / len
        })
        .collect();
    Ok(CurvatureProfile { curvatures })
}

/// Midpoint of every link, used as the link center marker.
pub fn midpoint_markers(pose: &PlanarChainPose) -> Vec<Point2> {
    pose.joint_positions
        .windows(2)
        .map(|w| Point2 {
            x: (w[0].x + w[1].x) / 2.0,
            y: (w[0].y + w[1].y) / 2.0,
        })
        .collect()
}

/// Pose, center markers and curvatures bundled for output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnakeReport {
    pub joints: Vec<Point2>,
    pub midpoints: Vec<Point2>,
    pub curvatures: Vec<f64>,
}

pub fn snake_report(joint_angles: &[f64], link_lengths: &[f64]) -> Result<SnakeReport> {
    let pose = planar_pose(joint_angles, link_lengths)?;
    let curvature = curvature_profile(joint_angles, link_lengths)?;
    Ok(SnakeReport {
        midpoints: midpoint_markers(&pose),
        joints: pose.joint_positions,
        curvatures: curvature.curvatures,
    })
}

/// Intermediate quantities of the original plotting routine that have no
/// defined role in any emitted figure. Exposed for debugging only; not part
/// of the stable output.
pub mod scratch {
    use serde::{Deserialize, Serialize};

    use super::{midpoint_markers, PlanarChainPose, Point2};

    #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
    pub struct ScratchTrace {
        /// Row vector `[1, 1, 0, 0]`.
        pub sum_selector: [f64; 4],
        /// Row vector `[1, -1, 0, 0]`.
        pub difference_selector: [f64; 4],
        /// Moore-Penrose pseudoinverse of `difference_selector` (a column).
        pub difference_pinv: [f64; 4],
        pub ones: [f64; 4],
        pub segment_count: usize,
        pub m: f64,
        /// Absolute link directions recovered from consecutive joint
        /// positions with `atan2`.
        pub segment_angles: Vec<f64>,
        /// Red markers at twice each link center.
        pub doubled_centers: Vec<Point2>,
        /// Red markers at three times the sum of adjacent link centers.
        pub tripled_pair_sums: Vec<Point2>,
    }

    /// Pseudoinverse of a nonzero row vector: `v^T / (v v^T)`.
    pub fn row_pinv(v: [f64; 4]) -> [f64; 4] {
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        v.map(|x| if norm2 > 0.0 { x / norm2 } else { 0.0 })
    }

    pub fn trace(pose: &PlanarChainPose) -> ScratchTrace {
        let difference_selector = [1.0, -1.0, 0.0, 0.0];
        let segment_angles = pose
            .joint_positions
            .windows(2)
            .map(|w| (w[1].y - w[0].y).atan2(w[1].x - w[0].x))
            .collect();
        let centers = midpoint_markers(pose);
        let doubled_centers = centers
            .iter()
            .map(|c| Point2 { x: 2.0 * c.x, y: 2.0 * c.y })
            .collect();
        let tripled_pair_sums = centers
            .windows(2)
            .map(|w| Point2 {
                x: 3.0 * (w[0].x + w[1].x),
                y: 3.0 * (w[0].y + w[1].y),
            })
            .collect();
        ScratchTrace {
            sum_selector: [1.0, 1.0, 0.0, 0.0],
            difference_selector,
            difference_pinv: row_pinv(difference_selector),
            ones: [1.0; 4],
            segment_count: pose.link_lengths.len(),
            m: 1.0,
            segment_angles,
            doubled_centers,
            tripled_pair_sums,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    const L: [f64; 4] = [0.1; 4];

    #[test]
    fn straight_chain() {
        let pose = planar_pose(&[0.0; 4], &L).unwrap();
        let xs: Vec<f64> = pose.joint_positions.iter().map(|p| p.x).collect();
        assert_relative_eq!(xs.as_slice(), [0.0, 0.1, 0.2, 0.3, 0.4].as_slice(), epsilon = 1e-15);
        assert!(pose.joint_positions.iter().all(|p| p.y == 0.0));
        let mids = midpoint_markers(&pose);
        let mx: Vec<f64> = mids.iter().map(|p| p.x).collect();
        assert_relative_eq!(mx.as_slice(), [0.05, 0.15, 0.25, 0.35].as_slice(), epsilon = 1e-15);
    }

    #[test]
    fn uniform_25_degree_bend() {
        let a = 25f64.to_radians();
        let pose = planar_pose(&[a; 4], &L).unwrap();
        let end = pose.end_point();
        assert_relative_eq!(end.x, 0.16343, epsilon = 1e-5);
        assert_relative_eq!(end.y, 0.31394, epsilon = 1e-5);
        let mid = midpoint_markers(&pose)[0];
        assert_relative_eq!(mid.x, 0.04532, epsilon = 1e-5);
        assert_relative_eq!(mid.y, 0.02113, epsilon = 1e-5);
        assert_relative_eq!(pose.cumulative_angles[3], 4.0 * a, max_relative = 1e-15);
    }

    #[test]
    fn vertical_chain() {
        let end = planar_pose(&[FRAC_PI_2, 0.0, 0.0, 0.0], &L).unwrap().end_point();
        assert_relative_eq!(end.x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(end.y, 0.4, epsilon = 1e-15);
    }

    #[test]
    fn curvature_examples() {
        let a = 25f64.to_radians();
        let k = curvature_profile(&[a; 4], &L).unwrap().curvatures;
        assert_relative_eq!(k[0], 4.3633, epsilon = 1e-4);
        assert_eq!(&k[1..], &[0.0, 0.0, 0.0]);

        assert_eq!(curvature_profile(&[0.0; 4], &L).unwrap().curvatures, vec![0.0; 4]);

        let ramp = [10f64, 20.0, 30.0, 40.0].map(f64::to_radians);
        for k in curvature_profile(&ramp, &L).unwrap().curvatures {
            assert_relative_eq!(k, 1.7453, epsilon = 1e-4);
        }
    }

    #[test]
    fn single_link_has_one_midpoint() {
        let pose = planar_pose(&[0.2], &[0.3]).unwrap();
        assert_eq!(midpoint_markers(&pose).len(), 1);
        assert_eq!(pose.joint_positions.len(), 2);
    }

    #[test]
    fn malformed_chains_rejected() {
        assert!(planar_pose(&[0.0; 3], &L).is_err());
        assert!(planar_pose(&[], &[]).is_err());
        assert!(planar_pose(&[0.0; 4], &[0.1, 0.1, 0.0, 0.1]).is_err());
        assert!(curvature_profile(&[f64::INFINITY, 0.0, 0.0, 0.0], &L).is_err());
    }

    #[test]
    fn scratch_pinv_of_difference_row() {
        assert_eq!(scratch::row_pinv([1.0, -1.0, 0.0, 0.0]), [0.5, -0.5, 0.0, 0.0]);
        let a = 25f64.to_radians();
        let pose = planar_pose(&[a; 4], &L).unwrap();
        let t = scratch::trace(&pose);
        for (i, ang) in t.segment_angles.iter().enumerate() {
            assert_relative_eq!(*ang, a * (i + 1) as f64, epsilon = 1e-12);
        }
        assert_eq!(t.doubled_centers.len(), 4);
        assert_eq!(t.tripled_pair_sums.len(), 3);
    }

    #[test]
    fn report_json_shape() {
        let r = snake_report(&[0.0; 4], &L).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["joints"].as_array().unwrap().len(), 5);
        assert_eq!(v["midpoints"].as_array().unwrap().len(), 4);
        assert_eq!(v["curvatures"].as_array().unwrap().len(), 4);
        assert!(v["joints"][1]["x"].is_number());
    }
}
