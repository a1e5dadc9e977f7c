//! Design, kinematics, evaluation and teleoperation simulation for a
//! four-module, cable-driven soft continuum robot that doubles as a
//! wheeled snake robot.
//!
//! All quantities are SI (meters, radians, seconds) inside this crate.
//! Millimeter and degree presentation happens at the CLI boundary.

pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod kinematics;
pub mod optimizer;
pub mod snake;
pub mod teleop;
pub mod wire;

pub use error::{Error, Result};
