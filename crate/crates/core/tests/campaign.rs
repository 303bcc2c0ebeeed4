mod common;

use std::f64::consts::PI;
use std::fs;

use pso_falsify::cli::report::{STATUS_FOUND, STATUS_NONE, VISITED_HEADER};
use pso_falsify::cli::{emit_report, load_report};
use pso_falsify::{
    is_collision, run_campaign, validate, ObstacleMap, Scenario, Scenario32, Scenario64, SearchSpace,
    SwarmParams32, SwarmParams64,
};

fn open_field() -> Scenario64 {
    let corner = Scenario64::corner();
    let map = ObstacleMap::new(*corner.map.arena(), vec![]).unwrap();
    // Keep start positions well away from the arena walls: with no
    // obstacles, leaving the arena is the only possible violation.
    let bounds = SearchSpace::new(
        vec![0.5, 0.5, -PI, -2.5, 0.0, 0.0],
        vec![3.5, 3.5, PI, 2.5, 4.0, 4.0],
    )
    .unwrap();
    Scenario::new("open", map, corner.rover, corner.controller, bounds).unwrap()
}

#[test]
fn open_field_yields_no_counterexamples() {
    let scenario = open_field();
    let params = SwarmParams64 { swarm_size: 20, max_iterations: 40, ..Default::default() };
    let report = run_campaign(&scenario, &params, 3).unwrap();
    assert!(!report.found_any());
    for run in &report.runs {
        assert!(!run.result.terminated_early);
        assert_eq!(run.result.iterations_used, 40);
        assert_eq!(run.result.best_value, 32f64.sqrt());
    }

    let dir = tempfile::tempdir().unwrap();
    let files = emit_report(&report, &scenario, dir.path(), false).unwrap();
    let doc = load_report(&files.counterexamples).unwrap();
    assert!(doc.counterexamples.is_empty());
    assert_eq!(doc.status, STATUS_NONE);
    assert!(files.plots.is_empty());
}

#[test]
fn runs_use_consecutive_seeds_and_are_reproducible() {
    let scenario = Scenario64::corner();
    let params = SwarmParams64 { seed: 40, ..Default::default() };
    let a = run_campaign(&scenario, &params, 3).unwrap();
    let b = run_campaign(&scenario, &params, 3).unwrap();
    assert_eq!(a.runs.iter().map(|r| r.seed).collect::<Vec<_>>(), vec![40, 41, 42]);
    for (x, y) in a.runs.iter().zip(&b.runs) {
        assert_eq!(x.result, y.result);
        assert_eq!(x.counterexample, y.counterexample);
    }
}

#[test]
fn counterexamples_start_safe_and_replay() {
    let scenario = Scenario64::corner();
    let report = run_campaign(&scenario, &SwarmParams64 { seed: 100, ..Default::default() }, 8).unwrap();
    let found: Vec<_> = report.counterexamples().collect();
    assert!(found.len() >= 6, "only {} of 8 runs found one", found.len());
    for c in &found {
        assert_eq!(c.objective_value, 0.0);
        assert!(!is_collision(c.state.pose().position(), scenario.rover.radius, &scenario.map));
        assert!(is_collision(c.successor_pose.position(), scenario.rover.radius, &scenario.map));
        assert!(validate(c, &scenario));
        assert!(c.omega_applied.abs() <= scenario.rover.omega_max);
    }
    // Different seeds, different counterexamples.
    for i in 0..found.len() {
        for j in i + 1..found.len() {
            let (a, b) = (found[i].state.to_array(), found[j].state.to_array());
            assert!(a.iter().zip(&b).any(|(p, q)| (p - q).abs() > 1e-6));
        }
    }
}

#[test]
fn emitted_files_are_complete_and_revalidate() {
    let scenario = Scenario64::corner();
    let report = run_campaign(&scenario, &SwarmParams64 { seed: 7, ..Default::default() }, 4).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = emit_report(&report, &scenario, dir.path(), true).unwrap();

    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        ["counterexamples.json", "run_0.svg", "run_1.svg", "run_2.svg", "run_3.svg", "visited.csv"]
    );

    let csv = fs::read_to_string(&files.visited).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(VISITED_HEADER));
    let total: usize = report.runs.iter().map(|r| r.result.evaluations).sum();
    assert_eq!(lines.clone().count(), total);
    for line in lines {
        assert_eq!(line.split(',').count(), 9);
    }

    let doc = load_report(&files.counterexamples).unwrap();
    assert_eq!(doc.status, STATUS_FOUND);
    assert_eq!(doc.scenario, "corner");
    assert_eq!(doc.runs.len(), 4);
    assert_eq!(doc.counterexamples.len(), report.counterexamples().count());
    for rec in &doc.counterexamples {
        assert_eq!(rec.objective, 0.0);
        assert!(validate(&rec.to_counterexample(), &scenario));
    }

    let raw: serde_json::Value = serde_json::from_str(&fs::read_to_string(&files.counterexamples).unwrap()).unwrap();
    let first = &raw["counterexamples"][0];
    for key in ["scenario", "seed", "state", "omega_applied", "successor", "objective", "evaluations"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    for key in ["x", "y", "theta", "omega", "x_T", "y_T"] {
        assert!(first["state"].get(key).is_some(), "missing state.{key}");
    }
}

#[test]
fn single_precision_campaign() {
    let scenario = Scenario32::corner();
    let report = run_campaign(&scenario, &SwarmParams32 { seed: 3, ..Default::default() }, 2).unwrap();
    for c in report.counterexamples() {
        assert!(validate(c, &scenario));
    }
    assert!(report.found_any());
}
