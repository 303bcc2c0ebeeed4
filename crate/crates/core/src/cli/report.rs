//! Campaign output files: counterexample JSON, visited-state CSV and
//! per-run SVG plots.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::svg::render_run;
use crate::falsifier::{CampaignReport, Counterexample, Scenario, SearchState};
use crate::plant::Pose;

pub const COUNTEREXAMPLES_FILE: &str = "counterexamples.json";
pub const VISITED_FILE: &str = "visited.csv";
pub const VISITED_HEADER: &str = "run,evaluation,x,y,theta,omega,x_T,y_T,J";

pub const STATUS_FOUND: &str = "counterexample found";
pub const STATUS_NONE: &str = "no counterexample found";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ReportError + '_ {
    move |source| ReportError::Io {
        path: path.to_owned(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub omega: f64,
    #[serde(rename = "x_T")]
    pub x_target: f64,
    #[serde(rename = "y_T")]
    pub y_target: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoseRecord {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

/// One counterexample as written to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    pub scenario: String,
    pub seed: u64,
    pub state: StateRecord,
    pub omega_applied: f64,
    pub successor: PoseRecord,
    pub objective: f64,
    pub evaluations: usize,
}

impl CounterexampleRecord {
    pub fn new(scenario: &str, c: &Counterexample<f64>) -> Self {
        let s = &c.state;
        Self {
            scenario: scenario.to_owned(),
            seed: c.seed,
            state: StateRecord {
                x: s.x,
                y: s.y,
                theta: s.theta,
                omega: s.omega,
                x_target: s.x_target,
                y_target: s.y_target,
            },
            omega_applied: c.omega_applied,
            successor: PoseRecord {
                x: c.successor_pose.x,
                y: c.successor_pose.y,
                theta: c.successor_pose.theta,
            },
            objective: c.objective_value,
            evaluations: c.evaluations_to_find,
        }
    }

    pub fn to_counterexample(&self) -> Counterexample<f64> {
        let s = &self.state;
        Counterexample {
            state: SearchState::from_slice(&[s.x, s.y, s.theta, s.omega, s.x_target, s.y_target]),
            successor_pose: Pose {
                x: self.successor.x,
                y: self.successor.y,
                theta: self.successor.theta,
            },
            omega_applied: self.omega_applied,
            objective_value: self.objective,
            seed: self.seed,
            evaluations_to_find: self.evaluations,
        }
    }
}

/// Per-run outcome as written to JSON. Wall time is left out so identical
/// campaigns produce identical files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub found: bool,
    pub best_value: Option<f64>,
    pub iterations_used: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub scenario: String,
    pub status: String,
    pub runs: Vec<RunRecord>,
    pub counterexamples: Vec<CounterexampleRecord>,
}

impl ReportDocument {
    pub fn new(report: &CampaignReport<f64>) -> Self {
        Self {
            scenario: report.scenario.clone(),
            status: if report.found_any() { STATUS_FOUND } else { STATUS_NONE }.to_owned(),
            runs: report
                .runs
                .iter()
                .map(|r| RunRecord {
                    run: r.run,
                    seed: r.seed,
                    found: r.counterexample.is_some(),
                    best_value: r.result.best_value.is_finite().then_some(r.result.best_value),
                    iterations_used: r.result.iterations_used,
                    evaluations: r.result.evaluations,
                })
                .collect(),
            counterexamples: report
                .counterexamples()
                .map(|c| CounterexampleRecord::new(&report.scenario, c))
                .collect(),
        }
    }
}

/// Paths of everything written by [`emit_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct EmittedFiles {
    pub counterexamples: PathBuf,
    pub visited: PathBuf,
    pub plots: Vec<PathBuf>,
}

pub fn svg_file_name(run: usize) -> String {
    format!("run_{run}.svg")
}

/// Writes the JSON report, the visited-state CSV and, if `plots`, one SVG
/// per run into `dir` (created if missing).
pub fn emit_report(
    report: &CampaignReport<f64>,
    scenario: &Scenario<f64>,
    dir: &Path,
    plots: bool,
) -> Result<EmittedFiles, ReportError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;

    let counterexamples = dir.join(COUNTEREXAMPLES_FILE);
    let mut json = serde_json::to_string_pretty(&ReportDocument::new(report)).expect("report serializes");
    json.push('\n');
    fs::write(&counterexamples, json).map_err(io_err(&counterexamples))?;

    let visited = dir.join(VISITED_FILE);
    write_visited(report, &visited)?;

    let mut plot_paths = Vec::new();
    if plots {
        for run in &report.runs {
            let path = dir.join(svg_file_name(run.run));
            fs::write(&path, render_run(scenario, run)).map_err(io_err(&path))?;
            plot_paths.push(path);
        }
    }
    Ok(EmittedFiles {
        counterexamples,
        visited,
        plots: plot_paths,
    })
}

fn write_visited(report: &CampaignReport<f64>, path: &Path) -> Result<(), ReportError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    let mut write = || -> std::io::Result<()> {
        writeln!(out, "{VISITED_HEADER}")?;
        for run in &report.runs {
            for (k, e) in run.result.visited_log.iter().enumerate() {
                let s = SearchState::from_slice(&e.position);
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    run.run, k, s.x, s.y, s.theta, s.omega, s.x_target, s.y_target, e.value
                )?;
            }
        }
        out.flush()
    };
    write().map_err(io_err(path))
}

/// Reads a report written by [`emit_report`].
pub fn load_report(path: &Path) -> Result<ReportDocument, ReportError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| ReportError::Json {
        path: path.to_owned(),
        source,
    })
}
