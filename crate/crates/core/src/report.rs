// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

/// One checked relation: where it was evaluated and how far it is from holding.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckEntry {
    pub label: String,
    pub defect: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `defect` against `tol`. NaN defects fail.
    pub fn push(&mut self, label: impl Into<String>, defect: f64, tol: f64) {
        self.entries.push(CheckEntry {
            label: label.into(),
            defect,
            passed: defect <= tol,
        });
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn max_defect(&self) -> f64 {
        self.entries.iter().map(|e| e.defect).fold(0.0, f64::max)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn get(&self, label: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
    }
}
