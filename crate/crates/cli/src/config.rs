use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// The suites `run_suite` knows, in the order `fiboptic check --suite all` runs them.
pub const SUITES: [&str; 10] = [
    "fincat-laws",
    "lens-laws",
    "optic-collapse",
    "indexed-equivalence",
    "polynomial-count",
    "fibre-beckchevalley",
    "dmark-validity",
    "fibre-specialise",
    "cosmic-cube",
    "dependent-cube",
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(CliError::Config(format!("unknown format {other:?} (expected json or text)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Text => "text",
        })
    }
}

/// Everything that determines a suite run. Two runs with equal configs
/// produce byte-identical JSON reports, unless `timing` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: String,
    pub max_size: usize,
    pub residual_bound: usize,
    pub entry_bound: usize,
    pub denominators: Vec<u32>,
    pub ceiling: usize,
    pub seed: u64,
    /// Random draws per sampled group.
    pub samples: usize,
    pub format: Format,
    /// Cube faces to report; empty means all.
    pub faces: Vec<String>,
    pub instances: Option<PathBuf>,
    /// Record wall-clock time in `duration_ms`; otherwise it is reported as 0.
    pub timing: bool,
}

impl SuiteConfig {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteConfig {
            suite: suite.into(),
            max_size: 2,
            residual_bound: 2,
            entry_bound: 2,
            denominators: vec![1, 2, 3],
            ceiling: fiboptic_core::DEFAULT_CEILING,
            seed: 0,
            samples: 500,
            format: Format::Json,
            faces: Vec::new(),
            instances: None,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !SUITES.contains(&self.suite.as_str()) {
            return Err(CliError::UnknownSuite(self.suite.clone()));
        }
        if self.max_size == 0 || self.residual_bound == 0 || self.entry_bound == 0 {
            return Err(CliError::Config("bounds must be positive".into()));
        }
        if self.ceiling == 0 {
            return Err(CliError::Config("ceiling must be at least 1".into()));
        }
        if self.denominators.is_empty() || self.denominators.contains(&0) {
            return Err(CliError::Config("denominators must be a non-empty list of positive integers".into()));
        }
        for face in &self.faces {
            if !["bottom", "top", "vertical", "dependent"].contains(&face.as_str()) {
                return Err(CliError::Config(format!("unknown face {face:?}")));
            }
        }
        Ok(())
    }

    pub fn wants_face(&self, face: &str) -> bool {
        self.faces.is_empty() || self.faces.iter().any(|f| f == face)
    }
}
