//! Small result records shared by the validators and checkers.

use serde::Serialize;

/// A single evaluated inequality `lhs <op> rhs` and whether it holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Comparison {
    pub fn new(lhs: f64, rhs: f64, holds: bool) -> Self {
        Self { lhs, rhs, holds }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub n: u64,
    pub lhs: f64,
    pub rhs: f64,
}

/// Outcome of checking an inequality for every n in a range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub name: String,
    pub first: u64,
    pub last: u64,
    pub checked: u64,
    pub violations: Vec<Violation>,
    /// Instance with the smallest slack; slack is negative for a violation.
    pub tightest: Option<Violation>,
    pub tightest_slack: f64,
}

impl SweepReport {
    pub(crate) fn new(name: impl Into<String>, first: u64, last: u64) -> Self {
        Self {
            name: name.into(),
            first,
            last,
            checked: 0,
            violations: Vec::new(),
            tightest: None,
            tightest_slack: f64::INFINITY,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn record(&mut self, n: u64, lhs: f64, rhs: f64, slack: f64, holds: bool) {
        self.checked += 1;
        let entry = Violation { n, lhs, rhs };
        if !holds {
            self.violations.push(entry);
        }
        if slack < self.tightest_slack || self.tightest.is_none() {
            self.tightest = Some(entry);
            self.tightest_slack = slack;
        }
    }
}
