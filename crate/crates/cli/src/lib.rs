//! Runs the law and equivalence suites of `fiboptic-core` at configured
//! bounds and reports the outcome as JSON or text.
//!
//! ```no_run
//! use fiboptic_cli::{run_suite, SuiteConfig};
//!
//! let report = run_suite(&SuiteConfig::new("optic-collapse")).unwrap();
//! assert!(report.success());
//! ```

pub mod config;
pub mod describe;
pub mod error;
pub mod report;
pub mod runner;
pub mod suites;

pub use config::{Format, SuiteConfig, SUITES};
pub use describe::{describe, describe_file};
pub use error::CliError;
pub use report::{Counterexample, GroupSummary, InstanceRecord, Mode, Status, SuiteReport};

pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, CliError> {
    config.validate()?;
    let jobs = suites::plan(config)?;
    Ok(runner::execute(config, jobs))
}
