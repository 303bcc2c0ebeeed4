use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pso_falsify::cli::{self, exit, ConfigError};
use pso_falsify::falsifier::{builtin_names, run_campaign, validate};

#[derive(Parser)]
#[command(name = "falsify", version, about = "Search for one-step collision counterexamples with particle swarm optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a falsification campaign.
    Run {
        /// Built-in scenario name or path to a JSON config.
        #[arg(long)]
        scenario: String,
        /// Number of independent swarm runs (seeds S, S+1, ...).
        #[arg(long, default_value_t = 4)]
        runs: usize,
        #[arg(long, env = "FALSIFY_SEED")]
        seed: Option<u64>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        swarm_size: Option<usize>,
        #[arg(long, default_value = "falsify-out")]
        out: PathBuf,
        /// Write one SVG plot per run.
        #[arg(long)]
        plots: bool,
    },
    /// Replay every counterexample in a report against a scenario.
    Validate {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        scenario: String,
    },
    /// List built-in scenarios.
    Scenarios,
}

fn config_error(e: ConfigError) -> ExitCode {
    eprintln!("configuration error: {e}");
    ExitCode::from(exit::CONFIG_ERROR as u8)
}

fn runtime_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit::RUNTIME_ERROR as u8)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Scenarios => {
            for name in builtin_names() {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            scenario,
            runs,
            seed,
            max_iters,
            swarm_size,
            out,
            plots,
        } => {
            let (scenario, mut params) = match cli::load_config(&scenario) {
                Ok(v) => v,
                Err(e) => return config_error(e),
            };
            if let Some(seed) = seed {
                params.seed = seed;
            }
            if let Some(n) = max_iters {
                params.max_iterations = n;
            }
            if let Some(n) = swarm_size {
                params.swarm_size = n;
            }
            if runs == 0 {
                eprintln!("configuration error: --runs must be >= 1");
                return ExitCode::from(exit::CONFIG_ERROR as u8);
            }
            if let Err(e) = params.validate() {
                eprintln!("configuration error: swarm: {e}");
                return ExitCode::from(exit::CONFIG_ERROR as u8);
            }

            let report = match run_campaign(&scenario, &params, runs) {
                Ok(r) => r,
                Err(e) => return runtime_error(e),
            };
            for r in &report.runs {
                let secs = r.wall_time.as_secs_f64();
                match &r.counterexample {
                    Some(c) => println!(
                        "run {} (seed {}): counterexample after {} evaluations, {:.2} s; omega_applied {:.4}",
                        r.run, r.seed, c.evaluations_to_find, secs, c.omega_applied
                    ),
                    None => println!(
                        "run {} (seed {}): none found after {} evaluations, {:.2} s; best J {:.6}",
                        r.run, r.seed, r.result.evaluations, secs, r.result.best_value
                    ),
                }
            }
            let files = match cli::emit_report(&report, &scenario, &out, plots) {
                Ok(f) => f,
                Err(e) => return runtime_error(e),
            };
            println!("wrote {}", files.counterexamples.display());
            println!("wrote {}", files.visited.display());
            for p in &files.plots {
                println!("wrote {}", p.display());
            }
            let found = report.counterexamples().count();
            if found > 0 {
                println!("{}: {found} of {runs} runs", cli::report::STATUS_FOUND);
                ExitCode::from(exit::FOUND as u8)
            } else {
                println!("{}", cli::report::STATUS_NONE);
                ExitCode::from(exit::NONE_FOUND as u8)
            }
        }
        Command::Validate { report, scenario } => {
            let (scenario, _) = match cli::load_config(&scenario) {
                Ok(v) => v,
                Err(e) => return config_error(e),
            };
            let doc = match cli::load_report(&report) {
                Ok(d) => d,
                Err(e) => return runtime_error(e),
            };
            let mut valid = 0;
            for (i, rec) in doc.counterexamples.iter().enumerate() {
                let ok = validate(&rec.to_counterexample(), &scenario);
                println!("counterexample {i} (seed {}): {}", rec.seed, if ok { "valid" } else { "INVALID" });
                valid += usize::from(ok);
            }
            if doc.counterexamples.is_empty() {
                println!("{}", cli::report::STATUS_NONE);
                ExitCode::from(exit::NONE_FOUND as u8)
            } else if valid == doc.counterexamples.len() {
                ExitCode::from(exit::FOUND as u8)
            } else {
                ExitCode::from(exit::NONE_FOUND as u8)
            }
        }
    }
}
