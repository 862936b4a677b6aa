//! Command-line front end for the cat0kit checks: space ingestion, suite
//! runs and reports.

pub mod figure;
pub mod ingest;
pub mod report;
pub mod suite;

use std::path::PathBuf;

use thiserror::Error;

pub use ingest::{ingest_space, IngestError, InputFormat};
pub use report::{emit_report, OutputFormat, Report, SuiteReport, SuiteStatus};
pub use suite::{run_suite, Suite, SuiteConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Ingest(#[from] IngestError),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Space(#[from] cat0kit::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
