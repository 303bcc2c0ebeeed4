//! Blended go-to-goal / avoid-obstacles steering with PID heading control.
//!
//! Forward speed is fixed by the plant; the controller only outputs a turn
//! rate. When any range sensor reads below `blend_threshold`, an avoidance
//! direction pointing away from the weighted sensor rays is mixed into the
//! goal direction with weight `blend_alpha`.

use thiserror::Error;

use crate::geometry::Point;
use crate::plant::{Pose, RoverParams, SensorScan};
use crate::scalar::{clamp, wrap_angle, Scalar};

const GOAL_REACHED: f64 = 1e-9;
const INTEGRAL_GAIN_FLOOR: f64 = 1e-9;
const DEGENERATE_NORM: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid controller parameter: {0}")]
pub struct ControllerParamsError(pub &'static str);

#[derive(Debug, Clone, PartialEq)]
pub struct ControllerParams<T> {
    pub kp: T,
    pub ki: T,
    pub kd: T,
    /// Sensor reading (m) below which a sensor contributes to avoidance.
    pub blend_threshold: T,
    /// Weight of the avoidance direction when any sensor is active.
    pub blend_alpha: T,
}

impl<T: Scalar> Default for ControllerParams<T> {
    fn default() -> Self {
        Self {
            kp: T::of(4.0),
            ki: T::of(0.01),
            kd: T::of(0.05),
            blend_threshold: T::of(0.25),
            blend_alpha: T::of(0.6),
        }
    }
}

impl<T: Scalar> ControllerParams<T> {
    pub fn validate(&self, rover: &RoverParams<T>) -> Result<(), ControllerParamsError> {
        if !(self.kp > T::zero() && self.kp.is_finite()) {
            return Err(ControllerParamsError("kp must be > 0"));
        }
        if !(self.ki >= T::zero() && self.ki.is_finite()) {
            return Err(ControllerParamsError("ki must be >= 0"));
        }
        if !(self.kd >= T::zero() && self.kd.is_finite()) {
            return Err(ControllerParamsError("kd must be >= 0"));
        }
        if !(rover.sensor_min_range < self.blend_threshold
            && self.blend_threshold <= rover.sensor_max_range)
        {
            return Err(ControllerParamsError(
                "blend_threshold must lie in (sensor_min_range, sensor_max_range]",
            ));
        }
        if !(self.blend_alpha >= T::zero() && self.blend_alpha <= T::one()) {
            return Err(ControllerParamsError("blend_alpha must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// PID state carried between control periods.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControllerMemory<T> {
    pub integral_error: T,
    pub previous_error: T,
    pub initialized: bool,
}

impl<T: Scalar> ControllerMemory<T> {
    /// Fresh memory whose derivative history is consistent with the rover
    /// already turning at `omega_prev`.
    pub fn seeded(omega_prev: T, params: &ControllerParams<T>, rover: &RoverParams<T>) -> Self {
        Self {
            integral_error: T::zero(),
            previous_error: omega_prev * rover.dt / params.kp,
            initialized: true,
        }
    }
}

fn normalized<T: Scalar>(x: T, y: T) -> Option<Point<T>> {
    let n = x.hypot(y);
    (n > T::of(DEGENERATE_NORM)).then(|| Point::new(x / n, y / n))
}

/// Steering direction before PID: goal direction, blended with avoidance
/// when any sensor is active. `None` when the target is reached.
pub fn steering_direction<T: Scalar>(
    pose: Pose<T>,
    scan: &SensorScan<T>,
    target: Point<T>,
    params: &ControllerParams<T>,
    rover: &RoverParams<T>,
) -> Option<Point<T>> {
    if pose.position().distance(target) < T::of(GOAL_REACHED) {
        return None;
    }
    let to_goal = normalized(target.x - pose.x, target.y - pose.y)
        .unwrap_or_else(|| Point::new(pose.theta.cos(), pose.theta.sin()));

    let mut push = Point::new(T::zero(), T::zero());
    let mut active = false;
    for (&reading, &alpha) in scan.readings.iter().zip(&rover.sensor_angles) {
        if reading < params.blend_threshold {
            active = true;
            let weight = (params.blend_threshold - reading) / params.blend_threshold;
            let heading = pose.theta + alpha;
            push.x = push.x + weight * heading.cos();
            push.y = push.y + weight * heading.sin();
        }
    }
    if !active {
        return Some(to_goal);
    }
    let Some(away) = normalized(-push.x, -push.y) else {
        return Some(to_goal);
    };
    let a = params.blend_alpha;
    let b = T::one() - a;
    Some(normalized(a * away.x + b * to_goal.x, a * away.y + b * to_goal.y).unwrap_or(to_goal))
}

/// One control period. Returns the saturated turn rate and updated memory.
///
/// Uninitialized memory is first seeded from `omega_prev`.
pub fn control<T: Scalar>(
    pose: Pose<T>,
    scan: &SensorScan<T>,
    target: Point<T>,
    params: &ControllerParams<T>,
    rover: &RoverParams<T>,
    memory: ControllerMemory<T>,
    omega_prev: T,
) -> (T, ControllerMemory<T>) {
    debug_assert_eq!(scan.readings.len(), rover.sensor_angles.len());
    let memory = if memory.initialized {
        memory
    } else {
        ControllerMemory::seeded(omega_prev, params, rover)
    };
    let Some(dir) = steering_direction(pose, scan, target, params, rover) else {
        return (T::zero(), memory);
    };

    let error = wrap_angle(dir.y.atan2(dir.x) - pose.theta);
    let windup = rover.omega_max / params.ki.max(T::of(INTEGRAL_GAIN_FLOOR));
    let integral = clamp(memory.integral_error + error * rover.dt, -windup, windup);
    let derivative = (error - memory.previous_error) / rover.dt;
    let raw = params.kp * error + params.ki * integral + params.kd * derivative;
    let omega = clamp(raw, -rover.omega_max, rover.omega_max);
    (
        omega,
        ControllerMemory {
            integral_error: integral,
            previous_error: error,
            initialized: true,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ObstacleMap, Rect};
    use crate::plant::sense;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn quiet(n: usize) -> SensorScan<f64> {
        SensorScan { readings: vec![0.3; n] }
    }

    #[test]
    fn params_validation() {
        let rover = RoverParams::default();
        ControllerParams::<f64>::default().validate(&rover).unwrap();
        for bad in [
            ControllerParams { kp: 0.0, ..Default::default() },
            ControllerParams { ki: -1.0, ..Default::default() },
            ControllerParams { blend_threshold: 0.04, ..Default::default() },
            ControllerParams { blend_threshold: 0.31, ..Default::default() },
            ControllerParams { blend_alpha: 1.2, ..Default::default() },
        ] {
            assert!(bad.validate(&rover).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn target_dead_ahead_gives_zero() {
        let rover = RoverParams::default();
        let (w, mem) = control(
            Pose::new(1.0, 1.0, 0.0),
            &quiet(5),
            Point::new(3.0, 1.0),
            &ControllerParams::default(),
            &rover,
            ControllerMemory::default(),
            0.0,
        );
        assert_eq!(w, 0.0);
        assert_eq!(mem.previous_error, 0.0);
        assert!(mem.initialized);
    }

    #[test]
    fn quarter_bearing_saturates() {
        let rover = RoverParams::default();
        let params = ControllerParams { kp: 2.0, ki: 0.0, kd: 0.0, ..Default::default() };
        let (w, mem) = control(
            Pose::new(1.0, 1.0, 0.0),
            &quiet(5),
            Point::new(1.0, 2.0),
            &params,
            &rover,
            ControllerMemory::default(),
            0.0,
        );
        // 2 * pi/2 = pi, saturated at omega_max
        assert_eq!(w, 2.5);
        assert!((mem.previous_error - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn unsaturated_pid_by_hand() {
        let rover = RoverParams::default();
        let params = ControllerParams { kp: 1.0, ki: 0.5, kd: 0.1, ..Default::default() };
        let target = Point::new(1.0 + 0.2f64.cos(), 1.0 + 0.2f64.sin());
        let omega_prev = 0.4;
        let (w, mem) = control(
            Pose::new(1.0, 1.0, 0.0),
            &quiet(5),
            target,
            &params,
            &rover,
            ControllerMemory::default(),
            omega_prev,
        );
        let e = 0.2;
        let e_prev = omega_prev * 0.05 / 1.0;
        let integral = e * 0.05;
        let expected = 1.0 * e + 0.5 * integral + 0.1 * (e - e_prev) / 0.05;
        assert!((w - expected).abs() < 1e-12, "{w} vs {expected}");
        assert!((mem.integral_error - integral).abs() < 1e-15);
    }

    #[test]
    fn integral_is_clamped() {
        let rover = RoverParams::default();
        let params = ControllerParams { kp: 1.0, ki: 1.0, kd: 0.0, ..Default::default() };
        let mem = ControllerMemory { integral_error: 100.0, previous_error: 0.0, initialized: true };
        let (_, next) = control(
            Pose::new(1.0, 1.0, 0.0),
            &quiet(5),
            Point::new(1.0, 2.0),
            &params,
            &rover,
            mem,
            0.0,
        );
        assert_eq!(next.integral_error, 2.5);
    }

    #[test]
    fn goal_reached_gives_zero() {
        let rover = RoverParams::default();
        let (w, _) = control(
            Pose::new(1.0, 1.0, 0.3),
            &quiet(5),
            Point::new(1.0, 1.0 + 1e-12),
            &ControllerParams::default(),
            &rover,
            ControllerMemory::default(),
            2.0,
        );
        assert_eq!(w, 0.0);
    }

    #[test]
    fn symmetric_readings_give_zero() {
        let rover = RoverParams::default();
        let run = |readings: Vec<f64>, params: &ControllerParams<f64>| {
            control(
                Pose::new(1.0, 1.0, 0.0),
                &SensorScan { readings },
                Point::new(3.0, 1.0),
                params,
                &rover,
                ControllerMemory::default(),
                0.0,
            )
            .0
        };
        // Side pushes cancel.
        assert!(run(vec![0.1, 0.3, 0.3, 0.3, 0.1], &ControllerParams::default()).abs() < 1e-12);
        // Forward-biased push, goal weight dominates.
        let weak = ControllerParams { blend_alpha: 0.3, ..Default::default() };
        assert!(run(vec![0.1, 0.2, 0.3, 0.2, 0.1], &weak).abs() < 1e-12);
    }

    #[test]
    fn avoidance_turns_away_from_obstacle() {
        let rover = RoverParams::default();
        // Only the front-left sensor is active: steer right.
        let scan = SensorScan { readings: vec![0.3, 0.3, 0.3, 0.1, 0.3] };
        let (w, _) = control(
            Pose::new(1.0, 1.0, 0.0),
            &scan,
            Point::new(3.0, 1.0),
            &ControllerParams::default(),
            &rover,
            ControllerMemory::default(),
            0.0,
        );
        assert!(w < 0.0);
    }

    fn mirror_y(y: f64, axis: f64) -> f64 {
        2.0 * axis - y
    }

    proptest! {
        #[test]
        fn output_is_bounded(
            x in 0.2f64..3.8, y in 0.2f64..3.8, th in -PI..PI, tx in 0.0f64..4.0, ty in 0.0f64..4.0,
            r in proptest::collection::vec(0.04f64..0.3, 5), wp in -2.5f64..2.5,
        ) {
            let rover = RoverParams::default();
            let (w, mem) = control(
                Pose::new(x, y, th), &SensorScan { readings: r }, Point::new(tx, ty),
                &ControllerParams::default(), &rover, ControllerMemory::default(), wp,
            );
            prop_assert!(w.abs() <= rover.omega_max);
            prop_assert!(mem.integral_error.is_finite());
        }

        #[test]
        fn sign_follows_bearing(
            th in -PI..PI, tx in -2.0f64..2.0, ty in -2.0f64..2.0, kp in 0.1f64..10.0,
        ) {
            let rover = RoverParams::default();
            let params = ControllerParams { kp, ki: 0.0, kd: 0.0, ..Default::default() };
            let pose = Pose::new(0.0, 0.0, th);
            prop_assume!(tx.hypot(ty) > 1e-6);
            let (w, _) = control(pose, &quiet(5), Point::new(tx, ty), &params, &rover, ControllerMemory::default(), 0.0);
            let err = wrap_angle(ty.atan2(tx) - th);
            if err != 0.0 {
                prop_assert_eq!(w.signum(), err.signum());
            }
        }

        #[test]
        fn mirror_scene_negates_omega(
            ox in 1.0f64..3.0, oy in 1.0f64..3.0, ow in 0.05f64..0.8, oh in 0.05f64..0.8,
            tx in 0.1f64..3.9, ty in 0.1f64..3.9, wp in -2.5f64..2.5,
        ) {
            // Rover heads along +x at y = 2; the arena is symmetric about that line.
            let arena = Rect::new(0.0, 0.0, 4.0, 4.0).unwrap();
            let pose = Pose::new(0.9, 2.0, 0.0);
            let mirrored_pose = Pose::new(0.9, 2.0, -0.0);
            let obstacle = Rect::new(ox, oy, ox + ow, oy + oh).unwrap();
            let mirrored_obstacle = Rect::new(ox, mirror_y(oy + oh, 2.0), ox + ow, mirror_y(oy, 2.0)).unwrap();
            let map = ObstacleMap::new(arena, vec![obstacle]).unwrap();
            let mirrored_map = ObstacleMap::new(arena, vec![mirrored_obstacle]).unwrap();
            let rover = RoverParams::default();
            let params = ControllerParams::default();

            let scan = sense(pose, &rover, &map);
            let mscan = sense(mirrored_pose, &rover, &mirrored_map);
            let (w, _) = control(pose, &scan, Point::new(tx, ty), &params, &rover, ControllerMemory::default(), wp);
            let (mw, _) = control(
                mirrored_pose, &mscan, Point::new(tx, mirror_y(ty, 2.0)), &params, &rover,
                ControllerMemory::default(), -wp,
            );
            prop_assert!((w + mw).abs() < 1e-12, "{} vs {}", w, mw);
        }

        #[test]
        fn deterministic(th in -PI..PI, r in proptest::collection::vec(0.04f64..0.3, 5)) {
            let rover = RoverParams::default();
            let scan = SensorScan { readings: r };
            let run = || control(
                Pose::new(1.0, 2.0, th), &scan, Point::new(3.0, 0.5),
                &ControllerParams::default(), &rover, ControllerMemory::default(), 0.7,
            );
            prop_assert_eq!(run(), run());
        }
    }
}
