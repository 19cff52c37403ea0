use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::SuiteConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One failed check, replayable from its witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub group: String,
    pub instance: String,
    pub law: String,
    pub witness: Value,
}

/// Outcome of a single instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub group: String,
    pub key: String,
    pub status: Status,
    pub checked: u64,
    #[serde(skip_serializing_if = "Value::is_null", default)]
    pub data: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub name: String,
    pub mode: Mode,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub checked: u64,
}

/// `instances = passed + failed`; skipped instances are counted apart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: SuiteConfig,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub counterexamples: Vec<Counterexample>,
    pub groups: Vec<GroupSummary>,
    pub results: Vec<InstanceRecord>,
    pub duration_ms: u64,
}

impl SuiteReport {
    pub fn success(&self) -> bool {
        self.failed == 0 && self.skipped == 0
    }

    pub fn group(&self, name: &str) -> Option<&GroupSummary> {
        self.groups.iter().find(|g| g.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        writeln!(s, "suite {}", self.suite).unwrap();
        writeln!(
            s,
            "config max-size {} residual-bound {} entry-bound {} denominators {:?} ceiling {} seed {} samples {}",
            c.max_size, c.residual_bound, c.entry_bound, c.denominators, c.ceiling, c.seed, c.samples
        )
        .unwrap();
        for g in &self.groups {
            writeln!(
                s,
                "  {:<28} {:<12} {} instances, {} passed, {} failed, {} skipped, {} checks",
                g.name,
                format!("[{}]", serde_json::to_value(g.mode).unwrap().as_str().unwrap()),
                g.instances,
                g.passed,
                g.failed,
                g.skipped,
                g.checked
            )
            .unwrap();
        }
        for r in self.results.iter().filter(|r| r.status != Status::Pass) {
            writeln!(s, "  {:?} {} {} {}", r.status, r.group, r.key, r.data).unwrap();
        }
        for ce in &self.counterexamples {
            writeln!(s, "  counterexample {} {} [{}]: {}", ce.group, ce.instance, ce.law, ce.witness).unwrap();
        }
        writeln!(
            s,
            "instances {} passed {} failed {} skipped {}",
            self.instances, self.passed, self.failed, self.skipped
        )
        .unwrap();
        writeln!(s, "duration_ms {}", self.duration_ms).unwrap();
        s
    }
}
