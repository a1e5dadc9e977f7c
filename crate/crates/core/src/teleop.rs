//! Discrete-time simulator of the joystick-operated robot.
//!
//! Two differential drives, one per bending axis, each wind an antagonistic
//! cable pair: turning the shaft lengthens one cable and shortens the other
//! by the same amount. The cable difference bends the two modules of that
//! axis (modules 1 and 3 yaw, modules 2 and 4 pitch). In snake mode a wheel
//! unit drives the chain forward or backward and a yaw bend of the tail
//! turns it.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::kinematics::{joint_frames, DhChain, HomogeneousTransform, MODULE_COUNT, MODULE_LENGTH};

/// Rest length of each cable: the cable runs the full arm.
pub const CABLE_REST_LENGTH: f64 = MODULE_COUNT as f64 * MODULE_LENGTH;

/// Bend limit of a single module.
pub const MODULE_BEND_LIMIT: f64 = FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Servo shaft speed at full joystick deflection, rad/s.
    pub servo_max_speed: f64,
    /// Pulley radius on the drive shaft, m.
    pub pulley_radius: f64,
    /// Total axis bend per meter of cable half-difference, rad/m.
    pub bend_per_cable_delta: f64,
    /// Wheel motor speed, rev/min.
    pub wheel_rpm: f64,
    /// Wheel radius, m.
    pub wheel_radius: f64,
    /// Heading rate per unit speed per radian of yaw bend, 1/m.
    pub turn_gain: f64,
    /// Simulation rate, Hz.
    pub tick_rate: f64,
}

impl Default for SimConfig {
    /// 60 rpm wheels of 35 mm radius. The servo speed (a typical continuous
    /// servo at 7.4 V) and the bend gain are not measured values: the gain is
    /// set so that 2 s of full deflection saturates both same-axis modules
    /// at 90 degrees.
    fn default() -> Self {
        let servo_max_speed = TAU / 3.0;
        let pulley_radius = 0.01;
        let full_winding = pulley_radius * servo_max_speed * 2.0;
        SimConfig {
            servo_max_speed,
            pulley_radius,
            bend_per_cable_delta: 2.0 * MODULE_BEND_LIMIT / full_winding,
            wheel_rpm: 60.0,
            wheel_radius: 0.035,
            turn_gain: 1.0,
            tick_rate: 50.0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("servo_max_speed", self.servo_max_speed)?;
        ensure_positive("pulley_radius", self.pulley_radius)?;
        ensure_positive("bend_per_cable_delta", self.bend_per_cable_delta)?;
        ensure_positive("wheel_rpm", self.wheel_rpm)?;
        ensure_positive("wheel_radius", self.wheel_radius)?;
        ensure_positive("turn_gain", self.turn_gain)?;
        ensure_positive("tick_rate", self.tick_rate)?;
        self.check_tick(self.tick_period())
    }

    pub fn tick_period(&self) -> f64 {
        1.0 / self.tick_rate
    }

    /// Forward wheel speed at full throttle, m/s.
    pub fn wheel_speed(&self) -> f64 {
        self.wheel_rpm / 60.0 * TAU * self.wheel_radius
    }

    /// Shaft travel beyond which further winding cannot bend the modules
    /// or would slacken a cable below zero length.
    pub fn shaft_limit(&self) -> f64 {
        let saturation = 2.0 * MODULE_BEND_LIMIT / (self.bend_per_cable_delta * self.pulley_radius);
        let slack = CABLE_REST_LENGTH / self.pulley_radius;
        saturation.min(slack)
    }

    fn check_tick(&self, dt: f64) -> Result<()> {
        ensure_positive("dt", dt)?;
        let per_tick = dt * self.servo_max_speed * self.pulley_radius * self.bend_per_cable_delta;
        if per_tick >= PI {
            return Err(Error::invalid(
                "dt",
                format!("a single tick could bend an axis by {per_tick} rad"),
            ));
        }
        Ok(())
    }
}

/// One differential drive and its antagonistic cable pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveState {
    pub shaft_angle: f64,
    pub pulley_radius: f64,
    pub cable_a_len: f64,
    pub cable_b_len: f64,
}

impl DriveState {
    pub fn at(shaft_angle: f64, pulley_radius: f64) -> Self {
        let wound = pulley_radius * shaft_angle;
        DriveState {
            shaft_angle,
            pulley_radius,
            cable_a_len: CABLE_REST_LENGTH + wound,
            cable_b_len: CABLE_REST_LENGTH - wound,
        }
    }

    /// Half the length difference of the pair.
    pub fn cable_delta(&self) -> f64 {
        (self.cable_a_len - self.cable_b_len) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum DriveSwitch {
    #[serde(rename = "fwd")]
    Forward,
    #[default]
    #[serde(rename = "off")]
    Off,
    #[serde(rename = "rev")]
    Reverse,
}

impl DriveSwitch {
    pub fn sign(self) -> f64 {
        match self {
            DriveSwitch::Forward => 1.0,
            DriveSwitch::Off => 0.0,
            DriveSwitch::Reverse => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Handheld manipulator: wheels idle.
    #[default]
    Scm,
    /// Snake robot: wheels drive the chain.
    Ssr,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TeleopInput {
    pub joystick_x: f64,
    pub joystick_y: f64,
    pub drive_switch: DriveSwitch,
    pub mode: Mode,
}

impl TeleopInput {
    pub fn neutral(mode: Mode) -> Self {
        TeleopInput {
            mode,
            ..TeleopInput::default()
        }
    }

    /// Joystick components clamped to [-1, 1]; non-finite values rejected.
    pub fn sanitized(&self) -> Result<Self> {
        ensure_finite("joystick_x", self.joystick_x)?;
        ensure_finite("joystick_y", self.joystick_y)?;
        Ok(TeleopInput {
            joystick_x: self.joystick_x.clamp(-1.0, 1.0),
            joystick_y: self.joystick_y.clamp(-1.0, 1.0),
            ..*self
        })
    }
}

/// Planar pose of the snake robot.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarPose {
    pub x: f64,
    pub y: f64,
    /// Wrapped to (-pi, pi].
    pub heading: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StateFlags {
    /// A drive hit its travel limit during the last tick.
    pub clamped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TeleopState {
    pub mode: Mode,
    pub yaw_drive: DriveState,
    pub pitch_drive: DriveState,
    /// Modules 1 and 3 bend in yaw, 2 and 4 in pitch. Radians.
    pub module_bends: [f64; MODULE_COUNT],
    pub ssr_pose: PlanarPose,
    pub wheel_speed: f64,
    pub sim_time: f64,
    pub flags: StateFlags,
}

impl TeleopState {
    pub fn total_yaw_bend(&self) -> f64 {
        self.module_bends[0] + self.module_bends[2]
    }

    pub fn total_pitch_bend(&self) -> f64 {
        self.module_bends[1] + self.module_bends[3]
    }
}

/// Initial state: straight modules, balanced cables, robot at the origin.
pub fn reset(config: &SimConfig) -> Result<TeleopState> {
    config.validate()?;
    Ok(TeleopState {
        mode: Mode::Scm,
        yaw_drive: DriveState::at(0.0, config.pulley_radius),
        pitch_drive: DriveState::at(0.0, config.pulley_radius),
        module_bends: [0.0; MODULE_COUNT],
        ssr_pose: PlanarPose::default(),
        wheel_speed: 0.0,
        sim_time: 0.0,
        flags: StateFlags::default(),
    })
}

pub fn wrap_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Advances a drive by `command` (in [-1, 1]) for `dt` seconds. Returns the
/// new drive and whether the shaft hit its travel limit.
fn advance_drive(drive: &DriveState, command: f64, config: &SimConfig, dt: f64) -> (DriveState, bool) {
    let limit = config.shaft_limit();
    let target = drive.shaft_angle + config.servo_max_speed * command * dt;
    let shaft = target.clamp(-limit, limit);
    (DriveState::at(shaft, config.pulley_radius), shaft != target)
}

/// Bend of each of the two same-axis modules for a drive.
fn axis_module_bend(drive: &DriveState, config: &SimConfig) -> f64 {
    let total = config.bend_per_cable_delta * drive.cable_delta();
    (total / 2.0).clamp(-MODULE_BEND_LIMIT, MODULE_BEND_LIMIT)
}

/// Unicycle motion over `dt` at speed `v` and constant heading rate `omega`,
/// integrated exactly along the arc.
fn integrate_unicycle(pose: &PlanarPose, v: f64, omega: f64, dt: f64) -> PlanarPose {
    let h0 = pose.heading;
    let dh = omega * dt;
    let (dx, dy) = if dh.abs() < 1e-12 {
        let (s, c) = h0.sin_cos();
        (v * dt * c, v * dt * s)
    } else {
        let h1 = h0 + dh;
        let radius = v / omega;
        (radius * (h1.sin() - h0.sin()), radius * (h0.cos() - h1.cos()))
    };
    PlanarPose {
        x: pose.x + dx,
        y: pose.y + dy,
        heading: wrap_angle(h0 + dh),
    }
}

/// Advances the simulation by `dt` seconds under a held input.
pub fn step(state: &TeleopState, input: &TeleopInput, config: &SimConfig, dt: f64) -> Result<TeleopState> {
    ensure_finite("dt", dt)?;
    config.check_tick(dt)?;
    let input = input.sanitized()?;

    let (yaw_drive, yaw_clamped) = advance_drive(&state.yaw_drive, input.joystick_x, config, dt);
    let (pitch_drive, pitch_clamped) = advance_drive(&state.pitch_drive, input.joystick_y, config, dt);
    let yaw = axis_module_bend(&yaw_drive, config);
    let pitch = axis_module_bend(&pitch_drive, config);
    let module_bends = [yaw, pitch, yaw, pitch];

    let (wheel_speed, ssr_pose) = match input.mode {
        Mode::Scm => (0.0, state.ssr_pose),
        Mode::Ssr => {
            let v = input.drive_switch.sign() * config.wheel_speed();
            let omega = config.turn_gain * v * (yaw + yaw);
            (v, integrate_unicycle(&state.ssr_pose, v, omega, dt))
        }
    };

    Ok(TeleopState {
        mode: input.mode,
        yaw_drive,
        pitch_drive,
        module_bends,
        ssr_pose,
        wheel_speed,
        sim_time: state.sim_time + dt,
        flags: StateFlags {
            clamped: yaw_clamped || pitch_clamped,
        },
    })
}

/// Spatial pose of the arm for the current module bends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScmPose {
    pub end_effector: [f64; 3],
    pub frames: Vec<HomogeneousTransform>,
}

pub fn scm_pose(state: &TeleopState) -> ScmPose {
    let frames = joint_frames(&DhChain::modules(state.module_bends));
    let p = frames.last().expect("four joints").translation();
    ScmPose {
        end_effector: [p.x, p.y, p.z],
        frames,
    }
}

/// Simulator that owns its state and ticks at the configured rate.
#[derive(Debug, Clone)]
pub struct Simulator {
    config: SimConfig,
    state: TeleopState,
    held: TeleopInput,
}

impl Simulator {
    pub fn new(config: SimConfig) -> Result<Self> {
        let state = reset(&config)?;
        Ok(Simulator {
            config,
            state,
            held: TeleopInput::default(),
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn state(&self) -> &TeleopState {
        &self.state
    }

    pub fn input(&self) -> &TeleopInput {
        &self.held
    }

    /// Replaces the held input; it applies from the next tick on.
    pub fn set_input(&mut self, input: TeleopInput) -> Result<()> {
        self.held = input.sanitized()?;
        Ok(())
    }

    pub fn reset(&mut self) {
        self.state = reset(&self.config).expect("config validated at construction");
        self.held = TeleopInput::default();
    }

    pub fn tick(&mut self) -> &TeleopState {
        self.state = step(&self.state, &self.held, &self.config, self.config.tick_period())
            .expect("config and held input validated");
        &self.state
    }
}
