//! Machine-readable check reports shared by `verify` and `demo`.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One verified identity. `residual` is the measured deviation in the sense
/// stated by `claim`; a check passes when it does not exceed `tolerance`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub claim: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub command: String,
    /// All flags that shaped the run, echoed back (sorted keys).
    pub params: serde_json::Map<String, serde_json::Value>,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub timestamp_unix_ms: u64,
}

/// Accumulates check records and renders the report.
pub struct Checker {
    command: String,
    params: serde_json::Map<String, serde_json::Value>,
    checks: Vec<CheckRecord>,
    started: Instant,
}

impl Checker {
    pub fn new(command: &str) -> Self {
        Checker {
            command: command.to_string(),
            params: serde_json::Map::new(),
            checks: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    /// Residual-style check: passes when `residual <= tolerance`.
    pub fn check(&mut self, id: &str, claim: &str, residual: f64, tolerance: f64) -> bool {
        let ok = residual.is_finite() && residual <= tolerance;
        self.checks.push(CheckRecord {
            check_id: id.to_string(),
            claim: claim.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: Some(residual),
            tolerance: Some(tolerance),
        });
        ok
    }

    /// Threshold-style check: passes when `value > threshold` (strict
    /// positivity style); records the value as the residual.
    pub fn check_above(&mut self, id: &str, claim: &str, value: f64, threshold: f64) -> bool {
        let ok = value.is_finite() && value > threshold;
        self.checks.push(CheckRecord {
            check_id: id.to_string(),
            claim: claim.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: Some(value),
            tolerance: Some(threshold),
        });
        ok
    }

    pub fn check_bool(&mut self, id: &str, claim: &str, ok: bool) -> bool {
        self.checks.push(CheckRecord {
            check_id: id.to_string(),
            claim: claim.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: None,
            tolerance: None,
        });
        ok
    }

    pub fn skip(&mut self, id: &str, claim: &str) {
        self.checks.push(CheckRecord {
            check_id: id.to_string(),
            claim: claim.to_string(),
            status: Status::Skipped,
            residual: None,
            tolerance: None,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn finish(self) -> ReportFile {
        let passed = self.checks.iter().filter(|c| c.status == Status::Pass).count();
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        let skipped = self.checks.iter().filter(|c| c.status == Status::Skipped).count();
        ReportFile {
            command: self.command,
            params: self.params,
            checks: self.checks,
            summary: Summary {
                passed,
                failed,
                skipped,
                runtime_ms: self.started.elapsed().as_millis() as u64,
            },
            timestamp_unix_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis() as u64)
                .unwrap_or(0),
        }
    }
}

/// Plain-text table rendering of a report.
pub fn render_table(report: &ReportFile) -> String {
    let mut out = String::new();
    let width = report
        .checks
        .iter()
        .map(|c| c.check_id.len())
        .max()
        .unwrap_or(8)
        .max(8);
    out.push_str(&format!(
        "{:<width$}  {:<7}  {:>12}  {:>12}  claim\n",
        "check", "status", "residual", "tolerance"
    ));
    for c in &report.checks {
        let status = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        };
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3e}"));
        out.push_str(&format!(
            "{:<width$}  {:<7}  {:>12}  {:>12}  {}\n",
            c.check_id,
            status,
            fmt(c.residual),
            fmt(c.tolerance),
            c.claim
        ));
    }
    out.push_str(&format!(
        "summary: {} passed, {} failed, {} skipped in {} ms\n",
        report.summary.passed, report.summary.failed, report.summary.skipped, report.summary.runtime_ms
    ));
    out
}
