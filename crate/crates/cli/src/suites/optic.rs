use fiboptic_core::optic::{normalize_cartesian, optic_of_lens, SlidingGraph};
use fiboptic_core::{ActionInstance, Boundary, LawReport, Lens};
use serde_json::json;

use super::pairs;
use crate::config::SuiteConfig;
use crate::error::CliError;
use crate::report::Mode::Exhaustive;
use crate::runner::{Check, Job};

/// π0 of the cartesian sliding graph against the lens count, and the
/// components against the lens each representative collapses to.
pub fn optic_collapse(config: &SuiteConfig) -> Result<Vec<Job<'static>>, CliError> {
    let (bound, ceiling) = (config.residual_bound, config.ceiling);
    let mut jobs = Vec::new();
    for p in pairs(config, || Boundary::up_to(config.max_size))? {
        let (s, t) = (p.source, p.target);
        jobs.push(Job::new("cartesian", Exhaustive, format!("{s}->{t}"), move |_| {
            let act = ActionInstance::cartesian();
            let residual_bound = bound.max(s.view.size());
            let g = SlidingGraph::build(&act, &s, &t, residual_bound, ceiling)?;
            let lenses = Lens::count(&s, &t);
            let components = g.component_count() as u128;
            let mut report = LawReport::new("cartesian collapse");
            report.check(
                components == lenses,
                "components = |Y|^|X|·|X'|^(|X||Y'|)",
                || json!({"components": components.to_string(), "lenses": lenses.to_string()}),
            );
            // each component holds exactly one lens, and every
            // representative collapses to the lens of its component
            let labels = g.labels();
            let mut owner = vec![None; g.component_count()];
            for l in Lens::enumerate(&s, &t, ceiling)? {
                let i = g.index_of(&optic_of_lens(&l));
                report.check(i.is_some(), "lens optic is a vertex", || json!({"lens": l}));
                if let Some(i) = i {
                    let clash = owner[labels[i]].replace(l.clone());
                    report.check(clash.is_none(), "one lens per component", || json!({"lens": l, "other": clash}));
                }
            }
            for (i, o) in g.vertices().iter().enumerate() {
                let l = normalize_cartesian(o, &act)?;
                report.check(
                    owner[labels[i]].as_ref() == Some(&l),
                    "representative collapses to its component's lens",
                    || json!({"optic": o, "lens": l}),
                );
            }
            let data = json!({
                "source": s,
                "target": t,
                "residual_bound": residual_bound,
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "components": components,
                "lens_count": lenses,
            });
            Ok(Check::new(report, data))
        }));
    }
    Ok(jobs)
}
