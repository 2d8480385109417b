//! Experiment harness behind the `cvtele` binary.
//!
//! Each command writes one file (CSV or a line-oriented report) and maps
//! its result onto a process exit code: 0 on success, 1 when a verification
//! fails, 2 for usage or configuration problems.

use std::path::PathBuf;

use thiserror::Error;

pub mod check;
pub mod config;
pub mod csv;
pub mod fig2;
pub mod sample;

pub use check::{cmd_check, CheckReport, CheckResult};
pub use config::{ConfigOverrides, RunConfig};
pub use fig2::{cmd_fig2, sweep, SweepOutcome, SweepRecord};
pub use sample::{cmd_sample, sample_rows, SampleOutcome, SampleRow};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] cvtele_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Core(_) => EXIT_VERIFICATION,
        }
    }
}
