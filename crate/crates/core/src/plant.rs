//! Unicycle rover kinematics and a ray-cast range sensor model.

use thiserror::Error;

use crate::geometry::{ray_exit_distance, ray_rect_intersection, ObstacleMap, Point};
use crate::scalar::{clamp, wrap_angle, Scalar};

/// Below this turn rate the straight-line branch of the integrator is used.
pub const OMEGA_EPSILON: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid rover parameter: {0}")]
pub struct RoverParamsError(pub &'static str);

#[derive(Debug, Clone, PartialEq)]
pub struct RoverParams<T> {
    /// Body radius, meters.
    pub radius: T,
    /// Constant forward speed, m/s.
    pub v_const: T,
    /// Turn-rate saturation, rad/s.
    pub omega_max: T,
    /// Controller period, seconds.
    pub dt: T,
    /// Sensor bearings in the body frame, radians.
    pub sensor_angles: Vec<T>,
    pub sensor_min_range: T,
    pub sensor_max_range: T,
}

impl<T: Scalar> Default for RoverParams<T> {
    fn default() -> Self {
        let pi = std::f64::consts::PI;
        Self {
            radius: T::of(0.09),
            v_const: T::of(0.1),
            omega_max: T::of(2.5),
            dt: T::of(0.05),
            sensor_angles: [-pi / 2.0, -pi / 4.0, 0.0, pi / 4.0, pi / 2.0]
                .into_iter()
                .map(T::of)
                .collect(),
            sensor_min_range: T::of(0.04),
            sensor_max_range: T::of(0.30),
        }
    }
}

impl<T: Scalar> RoverParams<T> {
    pub fn validate(&self) -> Result<(), RoverParamsError> {
        let pos = |v: T| v > T::zero() && v.is_finite();
        if !pos(self.radius) {
            return Err(RoverParamsError("radius must be > 0"));
        }
        if !pos(self.v_const) {
            return Err(RoverParamsError("v_const must be > 0"));
        }
        if !pos(self.omega_max) {
            return Err(RoverParamsError("omega_max must be > 0"));
        }
        if !pos(self.dt) {
            return Err(RoverParamsError("dt must be > 0"));
        }
        if !(self.sensor_min_range >= T::zero()
            && self.sensor_min_range < self.sensor_max_range
            && self.sensor_max_range.is_finite())
        {
            return Err(RoverParamsError(
                "sensor ranges must satisfy 0 <= sensor_min_range < sensor_max_range",
            ));
        }
        if self.sensor_angles.iter().any(|a| !a.is_finite()) {
            return Err(RoverParamsError("sensor_angles must be finite"));
        }
        Ok(())
    }
}

/// Planar pose; `theta` is kept in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose<T> {
    pub x: T,
    pub y: T,
    pub theta: T,
}

impl<T: Scalar> Pose<T> {
    pub fn new(x: T, y: T, theta: T) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
        }
    }

    pub fn position(&self) -> Point<T> {
        Point::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensorScan<T> {
    pub readings: Vec<T>,
}

/// Exact integration of the unicycle over `dt` with constant `v` and `omega`.
pub fn step_unicycle<T: Scalar>(pose: Pose<T>, v: T, omega: T, dt: T) -> Pose<T> {
    let theta_next = pose.theta + omega * dt;
    let (x, y) = if omega.abs() > T::of(OMEGA_EPSILON) {
        // (v/w)(sin(th + w dt) - sin th) rewritten with half angles so it
        // does not cancel catastrophically for small w.
        let half = omega * dt * T::of(0.5);
        let chord = T::of(2.0) * v / omega * half.sin();
        let mid = pose.theta + half;
        (pose.x + chord * mid.cos(), pose.y + chord * mid.sin())
    } else {
        (
            pose.x + v * dt * pose.theta.cos(),
            pose.y + v * dt * pose.theta.sin(),
        )
    };
    Pose::new(x, y, theta_next)
}

/// Range readings for every sensor, clamped to the sensor's range.
pub fn sense<T: Scalar>(pose: Pose<T>, params: &RoverParams<T>, map: &ObstacleMap<T>) -> SensorScan<T> {
    let origin = pose.position();
    let readings = params
        .sensor_angles
        .iter()
        .map(|&alpha| {
            let heading = pose.theta + alpha;
            let dir = Point::new(heading.cos(), heading.sin());
            let wall = ray_exit_distance(origin, dir, map.arena());
            let hit = map
                .obstacles()
                .iter()
                .filter_map(|r| ray_rect_intersection(origin, dir, r))
                .fold(wall, T::min);
            clamp(hit, params.sensor_min_range, params.sensor_max_range)
        })
        .collect();
    SensorScan { readings }
}
