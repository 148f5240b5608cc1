//! Verification reports: per-check records, JSON form and text tables.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    /// The check ran but its subject was vacuous or singular.
    Degenerate,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Degenerate => "degenerate",
        }
    }
}

impl From<crate::lefschetz::Verdict> for Status {
    fn from(v: crate::lefschetz::Verdict) -> Self {
        use crate::lefschetz::Verdict;
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail => Status::Fail,
            Verdict::Inconclusive => Status::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub params: Value,
    pub status: Status,
    pub summary: String,
    pub data: Value,
    /// Wall time, recorded only on request so that reports stay
    /// reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub check: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub instance_digest: String,
    pub field: String,
    pub m: usize,
    pub d: usize,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub skipped: Vec<Skipped>,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn has_fail(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text table, one row per check.
    pub fn render_table(&self) -> String {
        let name_w = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .chain(self.skipped.iter().map(|s| s.check.len()))
            .chain(std::iter::once(5))
            .max()
            .unwrap_or(5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "instance {} (m = {}, d = {}, {}), seed {}",
            &self.instance_digest[..12.min(self.instance_digest.len())],
            self.m,
            self.d,
            self.field,
            self.seed
        );
        let _ = writeln!(out, "{:<name_w$}  {:<12}  summary", "check", "status");
        let _ = writeln!(out, "{}  {}  {}", "-".repeat(name_w), "-".repeat(12), "-".repeat(7));
        for c in &self.checks {
            let timing = c.elapsed_ms.map(|ms| format!(" [{ms} ms]")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{:<name_w$}  {:<12}  {}{}",
                c.name,
                c.status.as_str(),
                c.summary,
                timing
            );
        }
        for s in &self.skipped {
            let _ = writeln!(out, "{:<name_w$}  {:<12}  {}", s.check, "skipped", s.reason);
        }
        out
    }
}
