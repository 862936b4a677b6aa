use serde::{Deserialize, Serialize};

use crate::point::Point;

/// Maximum number of witnesses a verdict retains.
pub const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// Points and parameters at which a check was evaluated, with the size of the
/// violation (or slack) observed there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub points: Vec<Point>,
    pub params: Vec<f64>,
    pub magnitude: f64,
}

impl Witness {
    pub fn new(
        label: impl Into<String>,
        points: Vec<Point>,
        params: Vec<f64>,
        magnitude: f64,
    ) -> Self {
        Witness {
            label: label.into(),
            points,
            params,
            magnitude,
        }
    }
}

/// Outcome of a sampled check.
///
/// `worst_slack` is the largest observed `lhs - rhs` over all tested
/// instances of an inequality `lhs <= rhs`; positive values are violations.
/// FAIL verdicts carry the worst violating instances as witnesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckVerdict {
    pub status: Status,
    pub worst_slack: f64,
    pub checks: usize,
    pub witnesses: Vec<Witness>,
}

impl CheckVerdict {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Accumulates slacks and keeps the worst violations.
#[derive(Debug, Clone)]
pub struct VerdictBuilder {
    tol: f64,
    worst_slack: f64,
    checks: usize,
    violations: Vec<(usize, Witness)>,
    inconclusive: bool,
}

impl VerdictBuilder {
    pub fn new(tol: f64) -> Self {
        VerdictBuilder {
            tol,
            worst_slack: f64::NEG_INFINITY,
            checks: 0,
            violations: Vec::new(),
            inconclusive: false,
        }
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Records one instance. The witness closure is only invoked for
    /// violations.
    pub fn record(&mut self, slack: f64, witness: impl FnOnce() -> Witness) {
        let index = self.checks;
        self.checks += 1;
        let slack = if slack.is_nan() { f64::INFINITY } else { slack };
        if slack > self.worst_slack {
            self.worst_slack = slack;
        }
        if slack > self.tol {
            let mut w = witness();
            w.magnitude = slack;
            self.push_violation(index, w);
        }
    }

    fn push_violation(&mut self, index: usize, w: Witness) {
        self.violations.push((index, w));
        // Keep the largest magnitudes, ties broken by first occurrence.
        self.violations.sort_by(|a, b| {
            b.1.magnitude
                .partial_cmp(&a.1.magnitude)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.0.cmp(&b.0))
        });
        self.violations.truncate(MAX_WITNESSES);
    }

    pub fn mark_inconclusive(&mut self) {
        self.inconclusive = true;
    }

    /// Folds another builder's results in as if its records came after ours.
    pub fn merge(&mut self, other: VerdictBuilder) {
        let offset = self.checks;
        self.checks += other.checks;
        if other.worst_slack > self.worst_slack {
            self.worst_slack = other.worst_slack;
        }
        self.inconclusive |= other.inconclusive;
        for (i, w) in other.violations {
            self.push_violation(offset + i, w);
        }
    }

    /// Folds in a finished verdict as if its checks came after ours.
    pub fn absorb(&mut self, v: CheckVerdict) {
        let offset = self.checks;
        self.checks += v.checks;
        if v.checks > 0 && v.worst_slack > self.worst_slack {
            self.worst_slack = v.worst_slack;
        }
        self.inconclusive |= v.status == Status::Inconclusive;
        for (i, w) in v.witnesses.into_iter().enumerate() {
            self.push_violation(offset + i, w);
        }
    }

    pub fn finish(self) -> CheckVerdict {
        let status = if !self.violations.is_empty() {
            Status::Fail
        } else if self.inconclusive || self.checks == 0 {
            Status::Inconclusive
        } else {
            Status::Pass
        };
        CheckVerdict {
            status,
            worst_slack: if self.checks == 0 {
                0.0
            } else {
                self.worst_slack
            },
            checks: self.checks,
            witnesses: self.violations.into_iter().map(|(_, w)| w).collect(),
        }
    }
}
