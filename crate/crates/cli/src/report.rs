//! Check reports in a text form and a versioned JSON form.
//!
//! Machine schema `chiral-report/1`:
//!
//! ```text
//! { "schema": "chiral-report/1",
//!   "spec": str, "bundle": str, "seed": u64, "samples": usize,
//!   "suites": [str],
//!   "records": [ { "suite": str, "id": str, "anchor": str,
//!                  "status": "pass" | "fail" | "skipped",
//!                  "samples": usize, "failures": usize,
//!                  "witness": str | null, "reason": str | null,
//!                  "wall_ms": u64 | null } ],
//!   "totals": { "passed": usize, "failed": usize, "skipped": usize } }
//! ```
//!
//! `wall_ms` is only filled in when timings are requested, so reports are
//! byte-identical for identical inputs by default.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use chiral_core::Outcome;

use crate::CliError;

pub const SCHEMA: &str = "chiral-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub suite: String,
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub samples: usize,
    pub failures: usize,
    pub witness: Option<String>,
    pub reason: Option<String>,
    pub wall_ms: Option<u64>,
}

impl Record {
    pub fn from_outcome(suite: &str, o: &Outcome) -> Self {
        Record {
            suite: suite.to_string(),
            id: o.id.clone(),
            anchor: o.anchor.clone(),
            status: if o.passed() { Status::Pass } else { Status::Fail },
            samples: o.samples,
            failures: o.failures,
            witness: o.witness.as_ref().map(ToString::to_string),
            reason: None,
            wall_ms: None,
        }
    }

    pub fn skipped(suite: &str, id: &str, anchor: &str, reason: &str) -> Self {
        Record {
            suite: suite.to_string(),
            id: id.to_string(),
            anchor: anchor.to_string(),
            status: Status::Skipped,
            samples: 0,
            failures: 0,
            witness: None,
            reason: Some(reason.to_string()),
            wall_ms: None,
        }
    }

    /// An error raised while running a check counts as a failure.
    pub fn errored(suite: &str, id: &str, anchor: &str, err: &dyn std::fmt::Display) -> Self {
        Record {
            suite: suite.to_string(),
            id: id.to_string(),
            anchor: anchor.to_string(),
            status: Status::Fail,
            samples: 0,
            failures: 1,
            witness: Some(format!("error: {err}")),
            reason: None,
            wall_ms: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema: String,
    pub spec: String,
    pub bundle: String,
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<String>,
    pub records: Vec<Record>,
    pub totals: Totals,
}

impl CheckReport {
    pub fn new(spec: &str, bundle: &str, seed: u64, samples: usize, suites: Vec<String>, mut records: Vec<Record>) -> Self {
        let order = |s: &str| suites.iter().position(|x| x == s).unwrap_or(usize::MAX);
        records.sort_by(|a, b| (order(&a.suite), &a.id).cmp(&(order(&b.suite), &b.id)));
        let mut totals = Totals::default();
        for r in &records {
            match r.status {
                Status::Pass => totals.passed += 1,
                Status::Fail => totals.failed += 1,
                Status::Skipped => totals.skipped += 1,
            }
        }
        CheckReport {
            schema: SCHEMA.to_string(),
            spec: spec.to_string(),
            bundle: bundle.to_string(),
            seed,
            samples,
            suites,
            records,
            totals,
        }
    }

    pub fn failed(&self) -> bool {
        self.totals.failed > 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{} passed, {} failed, {} skipped",
            self.totals.passed, self.totals.failed, self.totals.skipped
        )
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "spec {} ({} bundle), seed {}, {} samples per sampled check",
            self.spec, self.bundle, self.seed, self.samples
        );
        for suite in &self.suites {
            let _ = writeln!(s, "\n[{suite}]");
            for r in self.records.iter().filter(|r| &r.suite == suite) {
                let _ = write!(s, "  {} {:<32} {}", r.status.label(), r.id, r.anchor);
                match r.status {
                    Status::Skipped => {
                        let _ = write!(s, " -- {}", r.reason.as_deref().unwrap_or(""));
                    }
                    _ => {
                        let _ = write!(s, " ({}/{} samples failed)", r.failures, r.samples);
                    }
                }
                if let Some(ms) = r.wall_ms {
                    let _ = write!(s, " [{ms} ms]");
                }
                s.push('\n');
                if let Some(w) = &r.witness {
                    let _ = writeln!(s, "       witness: {w}");
                }
            }
        }
        let _ = writeln!(s, "\n{}", self.summary());
        s
    }

    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn parse_machine(text: &str) -> Result<Self, CliError> {
        let r: CheckReport = serde_json::from_str(text).map_err(|e| CliError::Report(e.to_string()))?;
        if r.schema != SCHEMA {
            return Err(CliError::Report(format!("unsupported schema '{}'", r.schema)));
        }
        Ok(r)
    }
}
