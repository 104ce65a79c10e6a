//! Batch front-end for the exact families invariant calculator: strict
//! JSON job specifications in, per-`n` route evaluations with cross-check
//! verdicts out.
//!
//! [`schema`] defines the job-file format and its parser; [`run`] builds
//! the base ring and family model, evaluates the selected routes, and
//! renders byte-stable text or JSON reports.

pub mod run;
pub mod schema;

pub use run::{run, Report};
pub use schema::{parse_spec, JobSpec, OutputFormat, Route};

/// Input and evaluation failures. Both map to exit code 2; route
/// mismatches are report verdicts, not errors.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("route {route}, n = {n}: {message}")]
    Eval {
        route: &'static str,
        n: u32,
        message: String,
    },
}

impl CliError {
    pub fn input(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Input {
            path: path.into(),
            message: message.into(),
        }
    }
}
