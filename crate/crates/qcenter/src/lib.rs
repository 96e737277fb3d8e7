//! Scenario-driven front end for `qcenter-core`: scenario files, the task
//! runner, text and JSON reports, and the shipped presets.

pub mod expr;
pub mod presets;
pub mod report;
pub mod runner;
pub mod sample;
pub mod scenario;

use std::path::Path;

pub use report::{Failure, Report, TaskReport, REPORT_SCHEMA};
pub use runner::run_scenario;
pub use scenario::{Overrides, Scenario, ScenarioFile, Task, SCENARIO_SCHEMA};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QcError {
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
}

impl QcError {
    /// 2 for unreadable or malformed input, 3 for input that parses but
    /// fails validation.
    pub fn exit_code(&self) -> i32 {
        match self {
            QcError::Io(_) | QcError::Parse(_) => 2,
            QcError::Validation(_) => 3,
        }
    }
}

/// Reads a scenario from a path, or from the embedded presets when the
/// argument is `preset:<name>`.
pub fn read_scenario_source(arg: &str) -> Result<String, QcError> {
    if let Some(name) = arg.strip_prefix("preset:") {
        return presets::get(name).map(str::to_string).ok_or_else(|| QcError::Io(format!("no preset named `{name}`")));
    }
    std::fs::read_to_string(Path::new(arg)).map_err(|e| QcError::Io(format!("{arg}: {e}")))
}

pub fn load_scenario(text: &str, overrides: Overrides) -> Result<Scenario, QcError> {
    ScenarioFile::from_json(text)?.build(overrides)
}
