//! One planner per suite. A planner turns a config into independent jobs;
//! [`crate::runner::execute`] runs them and assembles the report.

mod cube;
mod fibre;
mod indexed;
mod laws;
mod optic;

use std::path::Path;

use fiboptic_core::{FinSet, FinSetCat, FiniteCategory, FiniteFunction};
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::config::SuiteConfig;
use crate::error::CliError;
use crate::runner::Job;

pub fn plan(config: &SuiteConfig) -> Result<Vec<Job<'static>>, CliError> {
    match config.suite.as_str() {
        "fincat-laws" => no_instances(config).map(|_| laws::fincat_laws(config)),
        "lens-laws" => laws::lens_laws(config),
        "optic-collapse" => optic::optic_collapse(config),
        "indexed-equivalence" => indexed::indexed_equivalence(config),
        "polynomial-count" => indexed::polynomial_count(config),
        "fibre-beckchevalley" => no_instances(config).map(|_| fibre::beck_chevalley(config)),
        "dmark-validity" => no_instances(config).map(|_| fibre::dmark_validity(config)),
        "fibre-specialise" => no_instances(config).map(|_| fibre::specialise(config)),
        "cosmic-cube" => cube::cosmic_cube(config),
        "dependent-cube" => cube::dependent_cube(config),
        other => Err(CliError::UnknownSuite(other.to_string())),
    }
}

fn no_instances(config: &SuiteConfig) -> Result<(), CliError> {
    match &config.instances {
        Some(_) => Err(CliError::Config(format!("suite {} does not take an instance file", config.suite))),
        None => Ok(()),
    }
}

/// An instance file entry: one hom-set to check.
#[derive(Clone, Debug, Deserialize)]
pub struct Pair<T> {
    pub source: T,
    pub target: T,
}

/// The pairs listed in the configured instance file, or every pair drawn
/// from `default`.
fn pairs<T: Clone + DeserializeOwned>(
    config: &SuiteConfig,
    default: impl FnOnce() -> Vec<T>,
) -> Result<Vec<Pair<T>>, CliError> {
    match &config.instances {
        Some(path) => read_json(path),
        None => {
            let all = default();
            Ok(all
                .iter()
                .flat_map(|s| all.iter().map(move |t| Pair { source: s.clone(), target: t.clone() }))
                .collect())
        }
    }
}

pub(crate) fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_json(&path.display().to_string(), &text)
}

pub(crate) fn parse_json<T: DeserializeOwned>(path: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// A uniformly random function, or `None` when `b` is empty and `a` is not.
fn random_fn<R: Rng + ?Sized>(rng: &mut R, a: &FinSet, b: &FinSet) -> Option<FiniteFunction> {
    FinSetCat.sample(a, b, rng)
}

fn pick<'a, T, R: Rng + ?Sized>(rng: &mut R, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

fn sample_key(i: usize) -> String {
    format!("sample-{i:05}")
}
