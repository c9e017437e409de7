//! Scenario runner for `beauville-core`: configuration files, seeded
//! parallel trials, JSON reports and the acceptance suite.

pub mod config;
pub mod report;
pub mod run;
pub mod scenario;
pub mod verify;

use std::path::Path;

pub use config::{Config, ConfigError, Value};
pub use report::{emit_report, CheckRecord, Report, Status};
pub use run::{run_scenario, summary_line};
pub use scenario::{Scenario, ScenarioKind};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Reads a config file and applies command-line overrides.
pub fn load_scenario(
    path: &Path,
    trials: Option<u64>,
    seed: Option<u64>,
) -> Result<Scenario, ConfigError> {
    let mut cfg = Config::read(path)?;
    if let Some(t) = trials {
        cfg.set("trials", Value::Scalar(t.to_string()));
    }
    if let Some(s) = seed {
        cfg.set("seed", Value::Scalar(s.to_string()));
    }
    Scenario::from_config(&cfg)
}
