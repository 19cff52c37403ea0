use thiserror::Error;

use crate::config::SUITES;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown suite {0:?}; expected one of: {list}", list = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("{0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error(transparent)]
    Core(#[from] fiboptic_core::Error),
}
