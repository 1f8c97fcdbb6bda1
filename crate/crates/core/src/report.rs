use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Flagged,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Flagged => "flagged",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub status: Status,
    pub paper_anchor: String,
    pub details: Value,
    pub runtime_ms: u64,
}

impl CheckResult {
    pub fn new(id: impl Into<String>, status: Status, anchor: impl Into<String>, details: Value) -> Self {
        Self { check_id: id.into(), status, paper_anchor: anchor.into(), details, runtime_ms: 0 }
    }

    pub fn pass(id: impl Into<String>, anchor: impl Into<String>, details: Value) -> Self {
        Self::new(id, Status::Pass, anchor, details)
    }

    pub fn fail(id: impl Into<String>, anchor: impl Into<String>, details: Value) -> Self {
        Self::new(id, Status::Fail, anchor, details)
    }

    pub fn flagged(id: impl Into<String>, anchor: impl Into<String>, details: Value) -> Self {
        Self::new(id, Status::Flagged, anchor, details)
    }

    /// Pass or fail from a boolean.
    pub fn verdict(id: impl Into<String>, ok: bool, anchor: impl Into<String>, details: Value) -> Self {
        Self::new(id, if ok { Status::Pass } else { Status::Fail }, anchor, details)
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_runtime(mut self, ms: u64) -> Self {
        self.runtime_ms = ms;
        self
    }
}

/// Runs `f`, stamping the elapsed time on its result.
pub fn timed(f: impl FnOnce() -> CheckResult) -> CheckResult {
    let start = Instant::now();
    let r = f();
    let ms = start.elapsed().as_millis() as u64;
    r.with_runtime(ms)
}

/// Collects per-case failures for a check that loops over parameters.
#[derive(Default)]
pub struct Failures {
    pub cases: usize,
    pub failed: Vec<Value>,
}

impl Failures {
    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.failed.push(detail());
        }
    }

    pub fn into_result(self, id: &str, anchor: &str) -> CheckResult {
        let ok = self.failed.is_empty();
        CheckResult::verdict(id, ok, anchor, json!({"cases": self.cases, "failures": self.failed}))
    }
}
