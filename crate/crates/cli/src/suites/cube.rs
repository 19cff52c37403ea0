use fiboptic_core::lens::Container;
use fiboptic_core::pullback::{check_cosmic_cube_at, check_dependent_cube_at, copy_functor};
use fiboptic_core::{Boundary, LawReport};
use serde_json::json;

use super::pairs;
use crate::config::SuiteConfig;
use crate::error::CliError;
use crate::report::Mode::Exhaustive;
use crate::runner::{Check, Job};

/// One group per selected face; an explicit `dependent` face adds the
/// dependent cube as well.
pub fn cosmic_cube(config: &SuiteConfig) -> Result<Vec<Job<'static>>, CliError> {
    let (bound, ceiling) = (config.residual_bound, config.ceiling);
    let mut jobs = Vec::new();
    let listed = pairs(config, || Boundary::up_to(config.max_size))?;
    for face in ["bottom", "top", "vertical"] {
        if !config.wants_face(face) {
            continue;
        }
        for p in &listed {
            let (s, t) = (p.source.clone(), p.target.clone());
            jobs.push(Job::new(face, Exhaustive, format!("{s}->{t}"), move |_| {
                let cube = check_cosmic_cube_at(&s, &t, bound.max(s.view.size()), ceiling, &copy_functor)?;
                let record = cube.faces.into_iter().find(|f| f.face == face).expect("every face is recorded");
                let mut report = LawReport::new(format!("{face} face"));
                report.check(record.pass, &format!("{face} face"), || json!(record));
                Ok(Check::new(report, json!(record)))
            }));
        }
    }
    if config.faces.iter().any(|f| f == "dependent") {
        jobs.extend(dependent_jobs(config, None)?);
    }
    Ok(jobs)
}

pub fn dependent_cube(config: &SuiteConfig) -> Result<Vec<Job<'static>>, CliError> {
    let listed = pairs(config, || Container::up_to(config.max_size))?;
    dependent_jobs(config, Some(listed))
}

/// The conjecture is recorded, not asserted: an instance fails only when its
/// report is internally inconsistent.
fn dependent_jobs(
    config: &SuiteConfig,
    listed: Option<Vec<super::Pair<Container>>>,
) -> Result<Vec<Job<'static>>, CliError> {
    let (bound, ceiling) = (config.residual_bound, config.ceiling);
    let listed = match listed {
        Some(l) => l,
        None => pairs(&SuiteConfig { instances: None, ..config.clone() }, || Container::up_to(config.max_size))?,
    };
    Ok(listed
        .into_iter()
        .map(|p| {
            let key = format!("{:?}->{:?}", p.source.direction_sizes(), p.target.direction_sizes());
            Job::new("dependent", Exhaustive, key, move |_| {
                let r = check_dependent_cube_at(&p.source, &p.target, bound.max(p.source.positions().size()), ceiling)?;
                let mut report = LawReport::new("dependent cube (experimental)");
                report.check(r.consistent, "every component holds exactly one copy vertex", || json!(r));
                let mut data = json!(r);
                data["experimental"] = json!(true);
                Ok(Check::new(report, data))
            })
        })
        .collect())
}
