//! Command-line front end and randomized property suites for `logmaj`.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod suites;

pub use config::{RunConfig, Tolerances};
pub use error::CliError;
pub use report::{CaseRecord, Format, SuiteReport, Summary};
pub use suites::{run_suite, Suite};
