//! JSON reports.
//!
//! ```json
//! {
//!   "scenario": {"kind": "grassmann", "params": {"arity": "4", "dim": "6", ...}},
//!   "seed": 7,
//!   "checks": [
//!     {"name": "trial 0: ...", "anchor": "...", "status": "pass"},
//!     {"name": "...", "anchor": "...", "status": "fail", "witness": "..."}
//!   ],
//!   "duration_ms": 12,
//!   "version": "0.1.0"
//! }
//! ```
//!
//! `note` is present on a check when draws were resampled before it ran.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn pass(name: impl Into<String>, anchor: &str) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Pass,
            witness: None,
            note: None,
        }
    }

    pub fn fail(name: impl Into<String>, anchor: &str, witness: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
            note: None,
        }
    }

    pub fn skipped(name: impl Into<String>, anchor: &str, reason: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Skipped,
            witness: None,
            note: Some(reason.into()),
        }
    }

    pub fn with_note(mut self, note: Option<String>) -> Self {
        if note.is_some() {
            self.note = note;
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioEcho {
    pub kind: String,
    pub params: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: ScenarioEcho,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub duration_ms: u64,
    pub version: String,
}

impl Report {
    /// True when no check failed. Skipped checks do not count as failures.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn parse(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }
}

pub fn emit_report(r: &Report, path: &Path) -> std::io::Result<()> {
    let mut text = r.to_json();
    text.push('\n');
    std::fs::write(path, text)
}
