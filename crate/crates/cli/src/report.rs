//! Reports, their JSON and text renderings, and exit codes.

use std::fmt::Write as _;
use std::path::Path;

use cat0kit::{CheckVerdict, Status, Witness};
use serde::{Deserialize, Serialize};

use crate::suite::{Outcome, Suite, SuiteConfig};
use crate::CliError;

/// Bumped whenever a field is renamed, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_NOTHING_VERIFIED: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SuiteStatus {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

impl SuiteStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteStatus::Pass => "PASS",
            SuiteStatus::Fail => "FAIL",
            SuiteStatus::Inconclusive => "INCONCLUSIVE",
            SuiteStatus::Skipped => "SKIPPED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub status: SuiteStatus,
    /// Absent for skipped suites.
    pub worst_slack: Option<f64>,
    pub checks: usize,
    pub witnesses: Vec<Witness>,
    /// Why a suite was skipped or could not finish.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl SuiteReport {
    pub fn from_verdict(suite: Suite, v: CheckVerdict) -> Self {
        let status = match v.status {
            Status::Pass => SuiteStatus::Pass,
            Status::Fail => SuiteStatus::Fail,
            Status::Inconclusive => SuiteStatus::Inconclusive,
        };
        SuiteReport {
            suite,
            status,
            worst_slack: Some(v.worst_slack),
            checks: v.checks,
            witnesses: v.witnesses,
            reason: None,
        }
    }

    pub fn from_outcome(suite: Suite, outcome: Result<Outcome, cat0kit::Error>) -> Self {
        match outcome {
            Ok(Outcome::Verdict(v)) => SuiteReport::from_verdict(suite, v),
            Ok(Outcome::Skipped(reason)) => SuiteReport {
                suite,
                status: SuiteStatus::Skipped,
                worst_slack: None,
                checks: 0,
                witnesses: vec![],
                reason: Some(reason),
            },
            Err(e) => SuiteReport {
                suite,
                status: SuiteStatus::Inconclusive,
                worst_slack: None,
                checks: 0,
                witnesses: vec![],
                reason: Some(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Toolkit {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub suites: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub skipped: usize,
    pub checks: usize,
    pub witnesses: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub toolkit: Toolkit,
    pub config: SuiteConfig,
    pub suites: Vec<SuiteReport>,
    pub stats: RunStats,
}

impl Report {
    pub fn new(config: SuiteConfig, suites: Vec<SuiteReport>) -> Self {
        let mut stats = RunStats {
            suites: suites.len(),
            ..RunStats::default()
        };
        for s in &suites {
            match s.status {
                SuiteStatus::Pass => stats.passed += 1,
                SuiteStatus::Fail => stats.failed += 1,
                SuiteStatus::Inconclusive => stats.inconclusive += 1,
                SuiteStatus::Skipped => stats.skipped += 1,
            }
            stats.checks += s.checks;
            stats.witnesses += s.witnesses.len();
        }
        Report {
            schema_version: SCHEMA_VERSION,
            toolkit: Toolkit {
                name: "cat0kit".into(),
                version: env!("CARGO_PKG_VERSION").into(),
            },
            config,
            suites,
            stats,
        }
    }

    /// 1 if anything failed, otherwise 0 if anything passed, otherwise 2.
    pub fn exit_code(&self) -> i32 {
        if self.suites.iter().any(|s| s.status == SuiteStatus::Fail) {
            EXIT_FAIL
        } else if self.suites.iter().any(|s| s.status == SuiteStatus::Pass) {
            EXIT_PASS
        } else {
            EXIT_NOTHING_VERIFIED
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Json,
    Text,
}

/// Pretty JSON with a trailing newline, or the text summary.
pub fn emit_report(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        OutputFormat::Text => text_summary(report),
    }
}

/// One `SUITE STATUS worst-slack witness-count` line per suite, each
/// followed by its witnesses indented.
fn text_summary(report: &Report) -> String {
    let mut out = String::new();
    for s in &report.suites {
        // Adding zero turns -0 into 0.
        let slack = s
            .worst_slack
            .map_or("-".to_string(), |v| format!("{:.6e}", v + 0.0));
        let _ = write!(
            out,
            "{} {} {} {}",
            s.suite,
            s.status.as_str(),
            slack,
            s.witnesses.len()
        );
        if let Some(r) = &s.reason {
            let _ = write!(out, " ({r})");
        }
        out.push('\n');
        for w in &s.witnesses {
            let points: Vec<String> = w.points.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                out,
                "  witness {:.6e} {}: [{}] params {:?}",
                w.magnitude,
                w.label,
                points.join(", "),
                w.params
            );
        }
    }
    out
}

pub fn write_report(report: &Report, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, emit_report(report, OutputFormat::Json)).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}
