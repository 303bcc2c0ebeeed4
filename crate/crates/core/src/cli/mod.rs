//! Configuration loading and result emission behind the `falsify` binary.

pub mod config;
pub mod report;
mod svg;

pub use config::{load_config, parse_config, ConfigError, ScenarioConfig};
pub use report::{emit_report, load_report, EmittedFiles, ReportDocument, ReportError};

/// Process exit codes.
pub mod exit {
    /// A counterexample was found and validated.
    pub const FOUND: i32 = 0;
    /// No counterexample was found. This is not a proof of safety.
    pub const NONE_FOUND: i32 = 1;
    pub const CONFIG_ERROR: i32 = 2;
    /// I/O failure or a counterexample that failed to replay.
    pub const RUNTIME_ERROR: i32 = 3;
}
