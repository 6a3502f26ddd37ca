//! Scenario driver for `ydcat`: a scenario is a named pipeline of verification
//! steps over fixtures and providers; running it yields a JSON report.

pub mod context;
pub mod ops;
pub mod scenario;

use ydcat::Error;

pub use context::{Context, Params};
pub use scenario::{run_scenario, load_scenario, Report, Scenario, Step, StepReport};

/// Errors that abort a run, each with its own exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error(transparent)]
    Core(#[from] Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub const EXIT_FAILED: i32 = 1;
pub const EXIT_UNKNOWN_OP: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_TRUNCATION: i32 = 4;

impl CliError {
    /// Whether the error stops the whole run instead of failing one step.
    pub fn aborts(&self) -> bool {
        self.exit_code() != EXIT_FAILED
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownOp(_) => EXIT_UNKNOWN_OP,
            CliError::BadParam(_) => EXIT_PARSE,
            CliError::Core(Error::Parse { .. } | Error::Io(_) | Error::Shape { .. }) => EXIT_PARSE,
            CliError::Core(Error::TruncationExceeded { .. }) => EXIT_TRUNCATION,
            CliError::Core(_) => EXIT_FAILED,
        }
    }
}
