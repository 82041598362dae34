//! Config-driven experiment runner behind the `momentum-fw` binary:
//! `run` (solve and record traces), `compare` (tabulate traces) and
//! `selftest` (invariant checks).

mod compare;
mod config;
mod problem;
mod run;
mod selftest;

use thiserror::Error;

pub use compare::{cmd_compare, render_comparison, ComparisonReport, CompareRow, FStarSource, TraceColumn};
pub use config::{
    ConstraintConfig, ExperimentConfig, FStarPolicy, ProblemConfig, SetKind, DEFAULT_MATCOMP_ITERS,
    DEFAULT_VECTOR_ITERS,
};
pub use problem::{log_points, RankSample};
pub use run::{cmd_run, render_summary, AlgorithmSummary, RunOptions, RunSummary, SUMMARY_SCHEMA_VERSION};
pub use selftest::{cmd_selftest, render_selftest, Mutation, SelftestCheck, SelftestReport};

use crate::error::{DataError, DiagnosticsError, ObjectiveError, SetError, SolverError};

/// Invalid experiment configuration; `field` is the dotted path of the
/// offending key.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{field}: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("objective: {0}")]
    Objective(#[from] ObjectiveError),
    #[error("solver: {0}")]
    Solver(#[from] SolverError),
    #[error("constraint: {0}")]
    Set(#[from] SetError),
    #[error("diagnostics: {0}")]
    Diagnostics(#[from] DiagnosticsError),
    #[error("traces describe different problems: {0}")]
    MetadataMismatch(String),
    #[error("{0}")]
    CheckFailed(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(DataError::Io(e))
    }
}

impl CliError {
    /// 1 check or constraint failure, 2 configuration error, 3 I/O error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Objective(_) | CliError::MetadataMismatch(_) => 2,
            CliError::Data(_) => 3,
            CliError::Solver(_) | CliError::Set(_) | CliError::Diagnostics(_) | CliError::CheckFailed(_) => 1,
        }
    }
}
