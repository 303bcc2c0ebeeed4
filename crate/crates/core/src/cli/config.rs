//! JSON scenario configuration.
//!
//! Every section except `arena` may be omitted; omitted fields take the
//! library defaults. Unknown fields are rejected.
//!
//! ```json
//! {
//!   "name": "my-map",
//!   "arena": {"x_min": 0, "y_min": 0, "x_max": 4, "y_max": 4},
//!   "obstacles": [{"x_min": 1.5, "y_min": 1.5, "x_max": 2.5, "y_max": 2.0}],
//!   "rover": {"radius": 0.09, "v_const": 0.1, "omega_max": 2.5, "dt": 0.05,
//!             "sensor_angles": [-1.5708, 0, 1.5708],
//!             "sensor_min_range": 0.04, "sensor_max_range": 0.3},
//!   "controller": {"kp": 4, "ki": 0.01, "kd": 0.05,
//!                  "blend_threshold": 0.25, "blend_alpha": 0.6},
//!   "bounds": {"lower": [0, 0, -3.14159, -2.5, 0, 0],
//!              "upper": [4, 4, 3.14159, 2.5, 4, 4]},
//!   "swarm": {"swarm_size": 60, "max_iterations": 300, "inertia_weight": 0.7298,
//!             "cognitive_coefficient": 1.49618, "social_coefficient": 1.49618,
//!             "max_velocity_fraction": 0.2, "seed": 0}
//! }
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::controller::ControllerParams;
use crate::falsifier::{FalsifyError, Scenario};
use crate::geometry::{ObstacleMap, Rect};
use crate::optimizer::{SearchSpace, SwarmParams};
use crate::plant::RoverParams;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown scenario '{0}': not a built-in name and no such file")]
    UnknownScenario(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
}

impl ConfigError {
    fn invalid(context: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Self::Invalid {
            context: context.into(),
            message: err.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectConfig {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl From<&Rect<f64>> for RectConfig {
    fn from(r: &Rect<f64>) -> Self {
        Self {
            x_min: r.x_min,
            y_min: r.y_min,
            x_max: r.x_max,
            y_max: r.y_max,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoverConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_const: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sensor_angles: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sensor_min_range: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sensor_max_range: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ki: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kd: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blend_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blend_alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwarmConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub swarm_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inertia_weight: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cognitive_coefficient: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub social_coefficient: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_velocity_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// On-disk scenario plus optimizer settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub arena: RectConfig,
    #[serde(default)]
    pub obstacles: Vec<RectConfig>,
    #[serde(default)]
    pub rover: RoverConfig,
    #[serde(default)]
    pub controller: ControllerConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsConfig>,
    #[serde(default)]
    pub swarm: SwarmConfig,
}

fn default_name() -> String {
    "custom".to_owned()
}

fn rect(r: &RectConfig, context: &str) -> Result<Rect<f64>, ConfigError> {
    Rect::new(r.x_min, r.y_min, r.x_max, r.y_max).map_err(|e| ConfigError::invalid(context, e))
}

impl ScenarioConfig {
    /// Fully populated config describing `scenario` and `params`.
    pub fn from_scenario(scenario: &Scenario<f64>, params: &SwarmParams<f64>) -> Self {
        let r = &scenario.rover;
        let c = &scenario.controller;
        Self {
            name: scenario.name.clone(),
            arena: scenario.map.arena().into(),
            obstacles: scenario.map.obstacles().iter().map(Into::into).collect(),
            rover: RoverConfig {
                radius: Some(r.radius),
                v_const: Some(r.v_const),
                omega_max: Some(r.omega_max),
                dt: Some(r.dt),
                sensor_angles: Some(r.sensor_angles.clone()),
                sensor_min_range: Some(r.sensor_min_range),
                sensor_max_range: Some(r.sensor_max_range),
            },
            controller: ControllerConfig {
                kp: Some(c.kp),
                ki: Some(c.ki),
                kd: Some(c.kd),
                blend_threshold: Some(c.blend_threshold),
                blend_alpha: Some(c.blend_alpha),
            },
            bounds: Some(BoundsConfig {
                lower: scenario.bounds.lower().to_vec(),
                upper: scenario.bounds.upper().to_vec(),
            }),
            swarm: SwarmConfig {
                swarm_size: Some(params.swarm_size),
                max_iterations: Some(params.max_iterations),
                inertia_weight: Some(params.inertia_weight),
                cognitive_coefficient: Some(params.cognitive_coefficient),
                social_coefficient: Some(params.social_coefficient),
                max_velocity_fraction: Some(params.max_velocity_fraction),
                seed: Some(params.seed),
            },
        }
    }

    /// Fills defaults and checks every invariant.
    pub fn build(&self) -> Result<(Scenario<f64>, SwarmParams<f64>), ConfigError> {
        let arena = rect(&self.arena, "arena")?;
        let obstacles = self
            .obstacles
            .iter()
            .enumerate()
            .map(|(i, o)| rect(o, &format!("obstacles[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let map = ObstacleMap::new(arena, obstacles).map_err(|e| ConfigError::invalid("obstacles", e))?;

        let d = RoverParams::default();
        let r = &self.rover;
        let rover = RoverParams {
            radius: r.radius.unwrap_or(d.radius),
            v_const: r.v_const.unwrap_or(d.v_const),
            omega_max: r.omega_max.unwrap_or(d.omega_max),
            dt: r.dt.unwrap_or(d.dt),
            sensor_angles: r.sensor_angles.clone().unwrap_or(d.sensor_angles),
            sensor_min_range: r.sensor_min_range.unwrap_or(d.sensor_min_range),
            sensor_max_range: r.sensor_max_range.unwrap_or(d.sensor_max_range),
        };
        rover.validate().map_err(|e| ConfigError::invalid("rover", e))?;

        let d = ControllerParams::default();
        let c = &self.controller;
        let controller = ControllerParams {
            kp: c.kp.unwrap_or(d.kp),
            ki: c.ki.unwrap_or(d.ki),
            kd: c.kd.unwrap_or(d.kd),
            blend_threshold: c.blend_threshold.unwrap_or(d.blend_threshold),
            blend_alpha: c.blend_alpha.unwrap_or(d.blend_alpha),
        };

        let bounds = match &self.bounds {
            Some(b) => {
                if b.lower.len() != 6 || b.upper.len() != 6 {
                    return Err(ConfigError::invalid(
                        "bounds",
                        format!("bounds dimension must be 6, got {} / {}", b.lower.len(), b.upper.len()),
                    ));
                }
                SearchSpace::new(b.lower.clone(), b.upper.clone()).map_err(|e| ConfigError::invalid("bounds", e))?
            }
            None => Scenario::full_bounds(&arena, &rover),
        };
        let scenario = Scenario::new(self.name.clone(), map, rover, controller, bounds).map_err(|e| {
            let context = match e {
                FalsifyError::Controller(_) => "controller",
                _ => "scenario",
            };
            ConfigError::invalid(context, e)
        })?;

        let d = SwarmParams::default();
        let s = &self.swarm;
        let params = SwarmParams {
            swarm_size: s.swarm_size.unwrap_or(d.swarm_size),
            max_iterations: s.max_iterations.unwrap_or(d.max_iterations),
            inertia_weight: s.inertia_weight.unwrap_or(d.inertia_weight),
            cognitive_coefficient: s.cognitive_coefficient.unwrap_or(d.cognitive_coefficient),
            social_coefficient: s.social_coefficient.unwrap_or(d.social_coefficient),
            max_velocity_fraction: s.max_velocity_fraction.unwrap_or(d.max_velocity_fraction),
            seed: s.seed.unwrap_or(d.seed),
            target_value: d.target_value,
        };
        params.validate().map_err(|e| ConfigError::invalid("swarm", e))?;
        Ok((scenario, params))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parses config text; `path` is only used in diagnostics.
pub fn parse_config(text: &str, path: &Path) -> Result<(Scenario<f64>, SwarmParams<f64>), ConfigError> {
    let config: ScenarioConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    config.build()
}

/// Resolves a built-in scenario name or reads a JSON config file.
pub fn load_config(source: &str) -> Result<(Scenario<f64>, SwarmParams<f64>), ConfigError> {
    if let Some(scenario) = Scenario::builtin(source) {
        return Ok((scenario, SwarmParams::default()));
    }
    let path = Path::new(source);
    if !path.is_file() {
        return Err(ConfigError::UnknownScenario(source.to_owned()));
    }
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_config(&text, path)
}
