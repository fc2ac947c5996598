//! Problem and report formats and the commands of the `hypint` tool.

pub mod commands;
pub mod problem;
pub mod report;

use hypint_core::quadrature::QuadratureError;
use hypint_core::series::SeriesError;
use hypint_core::verify::VerifyError;
use thiserror::Error;

pub use commands::{run, Command, Options, Outcome};
pub use problem::ProblemFile;
pub use report::ReportFile;

/// Exit status when every check passed.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
/// Divergence, accuracy, poles and similar numerical failures.
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("numeric error: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }

    pub fn from_verify(e: VerifyError) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }

    pub fn from_quadrature(e: QuadratureError) -> Self {
        Self::from_verify(e.into())
    }

    pub fn from_series(e: SeriesError) -> Self {
        Self::from_verify(e.into())
    }
}
