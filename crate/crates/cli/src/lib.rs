//! Library half of the `turanlab` binary: sweep configuration, the sweep
//! runner and report writers. `main.rs` only parses flags and maps errors to
//! exit codes.

pub mod config;
pub mod report;
pub mod sweep;

use thiserror::Error;

pub use config::{GridPoint, SweepConfig};
pub use report::{PointRecord, Summary, VerificationReport};
pub use sweep::run_sweep;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] turanlab::Error),
    #[error("hypothesis not satisfied")]
    Hypothesis,
    #[error("{0}")]
    Disagreement(String),
    #[error("{0} point(s) inconclusive")]
    Inconclusive(usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(_) => 2,
            CliError::Hypothesis => 3,
            CliError::Disagreement(_) => 1,
            CliError::Inconclusive(_) => 4,
            CliError::Io(_) => 2,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("malformed json: {e}"))
    }
}

/// Parses `2,2,3` into a list; an empty string gives an empty list.
pub fn parse_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| CliError::Usage(format!("`{x}` is not a non-negative integer"))))
        .collect()
}

/// Parses `1,2;2,2` into a list of tuples.
pub fn parse_tuples(text: &str) -> Result<Vec<Vec<usize>>, CliError> {
    text.split(';').filter(|x| !x.trim().is_empty()).map(parse_list).collect()
}
