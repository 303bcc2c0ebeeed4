//! Falsification of one-step collision freedom for a differential-drive
//! rover by particle swarm optimization.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`, which is what the command-line front end
//! and file formats use.

pub mod cli;
pub mod controller;
pub mod falsifier;
pub mod geometry;
pub mod optimizer;
pub mod plant;
pub mod scalar;

pub use controller::{control, ControllerMemory, ControllerParams};
pub use falsifier::{
    objective, one_step, run_campaign, validate, CampaignReport, Counterexample, FalsifyError, RunReport,
    Scenario, SearchState,
};
pub use geometry::{
    is_collision, min_distance_to_obstacles, point_rect_distance, ray_rect_intersection, ObstacleMap, Point,
    Rect,
};
pub use optimizer::{init_swarm, pso_minimize, step_swarm, SearchSpace, SwarmParams, SwarmResult};
pub use plant::{sense, step_unicycle, Pose, RoverParams, SensorScan};
pub use scalar::{wrap_angle, Scalar};

pub type Point64 = Point<f64>;
pub type Rect64 = Rect<f64>;
pub type ObstacleMap64 = ObstacleMap<f64>;
pub type Pose64 = Pose<f64>;
pub type RoverParams64 = RoverParams<f64>;
pub type ControllerParams64 = ControllerParams<f64>;
pub type SearchSpace64 = SearchSpace<f64>;
pub type SwarmParams64 = SwarmParams<f64>;
pub type SwarmResult64 = SwarmResult<f64>;
pub type SearchState64 = SearchState<f64>;
pub type Scenario64 = Scenario<f64>;
pub type Counterexample64 = Counterexample<f64>;
pub type CampaignReport64 = CampaignReport<f64>;

pub type Scenario32 = Scenario<f32>;
pub type SwarmParams32 = SwarmParams<f32>;
