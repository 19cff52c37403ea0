use std::time::Instant;

use fiboptic_core::{Error, LawReport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::SuiteConfig;
use crate::report::{Counterexample, GroupSummary, InstanceRecord, Mode, Status, SuiteReport};

/// Counterexamples kept in a report; failure counts are always exact.
pub const MAX_COUNTEREXAMPLES: usize = 64;

/// The result of one instance: the checks made and any data worth reporting.
#[derive(Debug)]
pub struct Check {
    pub report: LawReport,
    pub data: Value,
}

impl Check {
    pub fn new(report: LawReport, data: Value) -> Self {
        Check { report, data }
    }

    /// A single equality between two independently computed counts.
    pub fn counts(law: &str, left: u128, right: u128, mut data: Value) -> Self {
        let mut report = LawReport::new(law);
        report.check(left == right, law, || json!({"left": left.to_string(), "right": right.to_string()}));
        if let Value::Object(m) = &mut data {
            m.insert("left".into(), json!(left));
            m.insert("right".into(), json!(right));
        }
        Check { report, data }
    }
}

type Body<'a> = Box<dyn Fn(&mut ChaCha8Rng) -> Result<Check, Error> + Send + Sync + 'a>;

pub struct Job<'a> {
    pub group: String,
    pub mode: Mode,
    pub key: String,
    pub body: Body<'a>,
}

impl<'a> Job<'a> {
    pub fn new(
        group: &str,
        mode: Mode,
        key: impl Into<String>,
        body: impl Fn(&mut ChaCha8Rng) -> Result<Check, Error> + Send + Sync + 'a,
    ) -> Self {
        Job { group: group.to_string(), mode, key: key.into(), body: Box::new(body) }
    }
}

/// Runs every job in parallel and assembles the report in canonical order.
///
/// Job `i` draws from its own ChaCha stream `i` of the configured seed, so
/// the outcome does not depend on scheduling.
pub fn execute(config: &SuiteConfig, jobs: Vec<Job<'_>>) -> SuiteReport {
    let start = Instant::now();
    let outcomes: Vec<(usize, Status, Check)> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, job)| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            match (job.body)(&mut rng) {
                Ok(c) if c.report.passed() => (i, Status::Pass, c),
                Ok(c) => (i, Status::Fail, c),
                Err(e @ (Error::Ceiling { .. } | Error::ResidualBound { .. })) => {
                    (i, Status::Skip, Check::new(LawReport::new("skipped"), json!({"reason": e.to_string()})))
                }
                Err(e) => {
                    let mut r = LawReport::new("error");
                    r.fail("error", json!(e.to_string()));
                    (i, Status::Fail, Check::new(r, Value::Null))
                }
            }
        })
        .collect();

    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.sort_by(|&a, &b| (&jobs[a].group, &jobs[a].key, a).cmp(&(&jobs[b].group, &jobs[b].key, b)));

    let mut groups: Vec<GroupSummary> = Vec::new();
    let mut results = Vec::with_capacity(jobs.len());
    let mut counterexamples = Vec::new();
    for &i in &order {
        let (_, status, check) = &outcomes[i];
        let job = &jobs[i];
        if groups.last().is_none_or(|g| g.name != job.group) {
            groups.push(GroupSummary {
                name: job.group.clone(),
                mode: job.mode,
                instances: 0,
                passed: 0,
                failed: 0,
                skipped: 0,
                checked: 0,
            });
        }
        let g = groups.last_mut().expect("group just pushed");
        g.checked += check.report.checked;
        match status {
            Status::Pass => {
                g.instances += 1;
                g.passed += 1;
            }
            Status::Fail => {
                g.instances += 1;
                g.failed += 1;
            }
            Status::Skip => {
                g.instances += 1;
                g.skipped += 1;
            }
        }
        for v in &check.report.violations {
            if counterexamples.len() < MAX_COUNTEREXAMPLES {
                counterexamples.push(Counterexample {
                    group: job.group.clone(),
                    instance: job.key.clone(),
                    law: v.law.clone(),
                    witness: v.witness.clone(),
                });
            }
        }
        results.push(InstanceRecord {
            group: job.group.clone(),
            key: job.key.clone(),
            status: *status,
            checked: check.report.checked,
            data: check.data.clone(),
        });
    }

    let sum = |f: fn(&GroupSummary) -> usize| groups.iter().map(f).sum::<usize>();
    SuiteReport {
        suite: config.suite.clone(),
        config: config.clone(),
        instances: sum(|g| g.instances),
        passed: sum(|g| g.passed),
        failed: sum(|g| g.failed),
        skipped: sum(|g| g.skipped),
        counterexamples,
        groups,
        results,
        duration_ms: if config.timing { start.elapsed().as_millis() as u64 } else { 0 },
    }
}
