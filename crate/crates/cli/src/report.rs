// SPDX-License-Identifier: Apache-2.0

//! Command reports: one JSON object or a short block of text.

use std::fmt::Write as _;

use quivmono::report::{CheckEntry, CheckReport};
use serde::Serialize;
use serde_json::{Map, Value};

/// Failing entries listed in text output before truncation.
const TEXT_FAILURE_LIMIT: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub passed: bool,
    pub tol: f64,
    pub max_defect: f64,
    pub evaluated: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<CheckEntry>,
}

impl CheckSummary {
    pub fn from_report(name: &str, report: CheckReport, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: report.passed(),
            tol,
            max_defect: report.max_defect(),
            evaluated: report.entries.len(),
            entries: report.entries,
        }
    }

    /// Check summarized by a count, without per-item entries.
    pub fn counted(name: &str, passed: bool, max_defect: f64, tol: f64, evaluated: usize) -> Self {
        Self {
            name: name.to_string(),
            passed,
            tol,
            max_defect,
            evaluated,
            entries: Vec::new(),
        }
    }

    pub fn single(name: &str, label: &str, defect: f64, tol: f64) -> Self {
        let mut report = CheckReport::new();
        report.push(label, defect, tol);
        Self::from_report(name, report, tol)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub passed: bool,
    pub checks: Vec<CheckSummary>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub details: Map<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Set when the command already wrote its result to stdout.
    #[serde(skip)]
    pub suppressed: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            passed: true,
            checks: Vec::new(),
            details: Map::new(),
            notes: Vec::new(),
            suppressed: false,
        }
    }

    pub fn check(&mut self, summary: CheckSummary) {
        self.passed &= summary.passed;
        self.checks.push(summary);
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report values serialize");
        self.details.insert(key.to_string(), value);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{}: {verdict}", self.command);
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "  [{tag}] {}: max defect {:.3e} (tol {:.1e}, {} evaluated)",
                c.name,
                c.max_defect,
                c.tol,
                c.evaluated
            );
            let failing: Vec<&CheckEntry> = c.entries.iter().filter(|e| !e.passed).collect();
            for e in failing.iter().take(TEXT_FAILURE_LIMIT) {
                let _ = writeln!(out, "         failing at {}: {:.3e}", e.label, e.defect);
            }
            if failing.len() > TEXT_FAILURE_LIMIT {
                let _ = writeln!(out, "         ... {} more", failing.len() - TEXT_FAILURE_LIMIT);
            }
        }
        for (k, v) in &self.details {
            let _ = writeln!(out, "  {k}: {}", render_value(v));
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        out
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
