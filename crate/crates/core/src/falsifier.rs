//! One-step falsification of collision freedom.
//!
//! A search point `s = (x, y, theta, omega, x_T, y_T)` is scored by placing
//! the rover at `(x, y, theta)`, running the controller once towards
//! `(x_T, y_T)` with `omega` as its turn-rate history, stepping the plant for
//! one period and measuring the clearance of the successor. The score is
//! exactly zero iff the (collision-free) start reaches a collision in one
//! step, so a swarm run with target value zero stops on the first
//! counterexample.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::controller::{control, ControllerMemory, ControllerParams, ControllerParamsError};
use crate::geometry::{is_collision, min_distance_to_obstacles, GeometryError, ObstacleMap, Point, Rect};
use crate::optimizer::{pso_minimize, OptimizerError, SearchSpace, SwarmParams, SwarmResult};
use crate::plant::{sense, step_unicycle, Pose, RoverParams, RoverParamsError};
use crate::scalar::{wrap_angle, Scalar};

/// Successor poses must be reproduced to this tolerance on replay.
pub const REPLAY_TOLERANCE: f64 = 1e-9;

/// Name of the built-in inside-corner benchmark.
pub const CORNER: &str = "corner";

#[derive(Debug, Error)]
pub enum FalsifyError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Rover(#[from] RoverParamsError),
    #[error(transparent)]
    Controller(#[from] ControllerParamsError),
    #[error(transparent)]
    Optimizer(#[from] OptimizerError),
    #[error("bounds dimension must be 6, got {0}")]
    BoundsDimension(usize),
    #[error("{0} bounds must lie within the arena")]
    BoundsOutsideArena(&'static str),
    #[error("omega bounds must lie within [-omega_max, omega_max]")]
    OmegaBounds,
    #[error("num_runs must be >= 1")]
    NoRuns,
    #[error("run {run} (seed {seed}) produced a counterexample that does not replay")]
    UnsoundCounterexample { run: usize, seed: u64 },
}

/// A point of the six-dimensional search space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchState<T> {
    pub x: T,
    pub y: T,
    pub theta: T,
    pub omega: T,
    pub x_target: T,
    pub y_target: T,
}

impl<T: Scalar> SearchState<T> {
    pub const DIMENSION: usize = 6;

    /// Reads `(x, y, theta, omega, x_T, y_T)`; theta is wrapped.
    pub fn from_slice(v: &[T]) -> Self {
        assert_eq!(v.len(), Self::DIMENSION, "search state has 6 coordinates");
        Self {
            x: v[0],
            y: v[1],
            theta: wrap_angle(v[2]),
            omega: v[3],
            x_target: v[4],
            y_target: v[5],
        }
    }

    pub fn to_array(&self) -> [T; 6] {
        [self.x, self.y, self.theta, self.omega, self.x_target, self.y_target]
    }

    pub fn pose(&self) -> Pose<T> {
        Pose::new(self.x, self.y, self.theta)
    }

    pub fn target(&self) -> Point<T> {
        Point::new(self.x_target, self.y_target)
    }
}

/// A complete falsification problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub name: String,
    pub map: ObstacleMap<T>,
    pub rover: RoverParams<T>,
    pub controller: ControllerParams<T>,
    pub bounds: SearchSpace<T>,
}

impl<T: Scalar> Scenario<T> {
    pub fn new(
        name: impl Into<String>,
        map: ObstacleMap<T>,
        rover: RoverParams<T>,
        controller: ControllerParams<T>,
        bounds: SearchSpace<T>,
    ) -> Result<Self, FalsifyError> {
        rover.validate()?;
        controller.validate(&rover)?;
        if bounds.dimension() != SearchState::<T>::DIMENSION {
            return Err(FalsifyError::BoundsDimension(bounds.dimension()));
        }
        let arena = map.arena();
        let (lo, hi) = (bounds.lower(), bounds.upper());
        let within = |d: usize, min: T, max: T| min <= lo[d] && hi[d] <= max;
        if !within(0, arena.x_min, arena.x_max) || !within(1, arena.y_min, arena.y_max) {
            return Err(FalsifyError::BoundsOutsideArena("position"));
        }
        if !within(4, arena.x_min, arena.x_max) || !within(5, arena.y_min, arena.y_max) {
            return Err(FalsifyError::BoundsOutsideArena("target"));
        }
        if !within(3, -rover.omega_max, rover.omega_max) {
            return Err(FalsifyError::OmegaBounds);
        }
        Ok(Self {
            name: name.into(),
            map,
            rover,
            controller,
            bounds,
        })
    }

    /// Positions and targets over the whole arena, any heading, any
    /// admissible turn rate.
    pub fn full_bounds(arena: &Rect<T>, rover: &RoverParams<T>) -> SearchSpace<T> {
        let pi = T::PI();
        SearchSpace::new(
            vec![arena.x_min, arena.y_min, -pi, -rover.omega_max, arena.x_min, arena.y_min],
            vec![arena.x_max, arena.y_max, pi, rover.omega_max, arena.x_max, arena.y_max],
        )
        .expect("arena and omega_max are validated")
    }

    /// The inside-corner benchmark: a 4 x 4 m arena with two rectangles
    /// forming an L-shaped corner.
    pub fn corner() -> Self {
        let rect = |a: f64, b: f64, c: f64, d: f64| {
            Rect::new(T::of(a), T::of(b), T::of(c), T::of(d)).expect("valid constant")
        };
        let arena = rect(0.0, 0.0, 4.0, 4.0);
        let map = ObstacleMap::new(arena, vec![rect(1.5, 1.5, 2.5, 2.0), rect(2.5, 1.5, 2.7, 3.0)])
            .expect("obstacles inside arena");
        let rover = RoverParams::default();
        let bounds = Self::full_bounds(&arena, &rover);
        Self::new(CORNER, map, rover, ControllerParams::default(), bounds).expect("valid built-in")
    }

    /// Looks up a built-in scenario by name.
    pub fn builtin(name: &str) -> Option<Self> {
        (name == CORNER).then(Self::corner)
    }
}

/// Names of the built-in scenarios.
pub fn builtin_names() -> &'static [&'static str] {
    &[CORNER]
}

/// Controller output and plant successor for one control period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition<T> {
    pub omega_applied: T,
    pub successor: Pose<T>,
}

/// Runs the controller (with fresh memory) and the plant for one period.
pub fn one_step<T: Scalar>(state: &SearchState<T>, scenario: &Scenario<T>) -> Transition<T> {
    let pose = state.pose();
    let scan = sense(pose, &scenario.rover, &scenario.map);
    let (omega_applied, _) = control(
        pose,
        &scan,
        state.target(),
        &scenario.controller,
        &scenario.rover,
        ControllerMemory::default(),
        state.omega,
    );
    let successor = step_unicycle(pose, scenario.rover.v_const, omega_applied, scenario.rover.dt);
    Transition {
        omega_applied,
        successor,
    }
}

/// Score for starting states that already collide: above any clearance, and
/// growing with penetration depth so the swarm is pushed back out.
fn initial_collision_penalty<T: Scalar>(p: Point<T>, scenario: &Scenario<T>) -> T {
    let arena = scenario.map.arena();
    let clearance = scenario
        .map
        .nearest_obstacle_distance(p)
        .map_or(arena.inner_clearance(p), |d| d.min(arena.inner_clearance(p)));
    arena.diagonal() + (scenario.rover.radius - clearance).max(T::zero())
}

/// Zero iff the collision-free start collides after one control period;
/// otherwise the successor's clearance to the nearest obstacle.
pub fn objective<T: Scalar>(state: &SearchState<T>, scenario: &Scenario<T>) -> T {
    let radius = scenario.rover.radius;
    let start = state.pose().position();
    if is_collision(start, radius, &scenario.map) {
        return initial_collision_penalty(start, scenario);
    }
    let next = one_step(state, scenario).successor.position();
    if is_collision(next, radius, &scenario.map) {
        T::zero()
    } else {
        min_distance_to_obstacles(next, &scenario.map, radius)
    }
}

/// A collision-free state whose one-step successor collides.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample<T> {
    pub state: SearchState<T>,
    pub successor_pose: Pose<T>,
    pub omega_applied: T,
    pub objective_value: T,
    pub seed: u64,
    pub evaluations_to_find: usize,
}

impl<T: Scalar> Counterexample<T> {
    /// Records the transition from `state`; does not check that it collides.
    pub fn from_state(state: SearchState<T>, scenario: &Scenario<T>, seed: u64, evaluations_to_find: usize) -> Self {
        let step = one_step(&state, scenario);
        Self {
            state,
            successor_pose: step.successor,
            omega_applied: step.omega_applied,
            objective_value: objective(&state, scenario),
            seed,
            evaluations_to_find,
        }
    }
}

/// Replays the counterexample and checks it: the start is collision-free,
/// the recomputed successor matches the recorded one and collides.
pub fn validate<T: Scalar>(c: &Counterexample<T>, scenario: &Scenario<T>) -> bool {
    let radius = scenario.rover.radius;
    let map = &scenario.map;
    if c.objective_value != T::zero() || is_collision(c.state.pose().position(), radius, map) {
        return false;
    }
    let pose = c.state.pose();
    let scan = sense(pose, &scenario.rover, map);
    let memory = ControllerMemory::seeded(c.state.omega, &scenario.controller, &scenario.rover);
    let (omega, _) = control(pose, &scan, c.state.target(), &scenario.controller, &scenario.rover, memory, c.state.omega);
    let next = step_unicycle(pose, scenario.rover.v_const, omega, scenario.rover.dt);

    let tol = T::of(REPLAY_TOLERANCE);
    let recorded = c.successor_pose;
    let matches = (next.x - recorded.x).abs() <= tol
        && (next.y - recorded.y).abs() <= tol
        && wrap_angle(next.theta - recorded.theta).abs() <= tol;
    matches && is_collision(next.position(), radius, map)
}

/// Outcome of one swarm run of a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport<T> {
    pub run: usize,
    pub seed: u64,
    pub result: SwarmResult<T>,
    pub counterexample: Option<Counterexample<T>>,
    pub wall_time: Duration,
}

impl<T: Scalar> RunReport<T> {
    pub fn best_state(&self) -> SearchState<T> {
        SearchState::from_slice(&self.result.best_position)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignReport<T> {
    pub scenario: String,
    pub runs: Vec<RunReport<T>>,
}

impl<T: Scalar> CampaignReport<T> {
    pub fn counterexamples(&self) -> impl Iterator<Item = &Counterexample<T>> {
        self.runs.iter().filter_map(|r| r.counterexample.as_ref())
    }

    pub fn found_any(&self) -> bool {
        self.counterexamples().next().is_some()
    }
}

/// Runs `num_runs` independent swarm searches with seeds `params.seed`,
/// `params.seed + 1`, ... and target value zero. Runs execute in parallel;
/// the report is ordered by run index.
///
/// A run that ends above zero simply has no counterexample. Absence of
/// counterexamples is not evidence that the property holds.
pub fn run_campaign<T: Scalar>(
    scenario: &Scenario<T>,
    params: &SwarmParams<T>,
    num_runs: usize,
) -> Result<CampaignReport<T>, FalsifyError> {
    if num_runs == 0 {
        return Err(FalsifyError::NoRuns);
    }
    params.validate()?;
    let runs = (0..num_runs)
        .into_par_iter()
        .map(|run| run_once(scenario, params, run))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CampaignReport {
        scenario: scenario.name.clone(),
        runs,
    })
}

fn run_once<T: Scalar>(scenario: &Scenario<T>, params: &SwarmParams<T>, run: usize) -> Result<RunReport<T>, FalsifyError> {
    let seed = params.seed.wrapping_add(run as u64);
    let run_params = SwarmParams {
        seed,
        target_value: T::zero(),
        ..params.clone()
    };
    let started = Instant::now();
    let result = pso_minimize(
        |x: &[T]| objective(&SearchState::from_slice(x), scenario),
        &scenario.bounds,
        &run_params,
    )?;
    let wall_time = started.elapsed();

    let counterexample = if result.terminated_early {
        let c = Counterexample::from_state(
            SearchState::from_slice(&result.best_position),
            scenario,
            seed,
            result.evaluations,
        );
        if !validate(&c, scenario) {
            return Err(FalsifyError::UnsoundCounterexample { run, seed });
        }
        Some(c)
    } else {
        None
    };
    Ok(RunReport {
        run,
        seed,
        result,
        counterexample,
        wall_time,
    })
}
