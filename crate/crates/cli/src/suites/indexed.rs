use std::sync::Arc;

use fiboptic_core::indexed::{
    count_indexed_classes_cached, count_polynomial_nat, iopt_compose, iopt_to_dlens, IndexedFamily, IndexedOptic,
    IndexedSlidingGraph, ResidualMatrix, RowClassCache,
};
use fiboptic_core::lens::count_dlens_hom;
use fiboptic_core::{ActionInstance, DepLens, FinSetCat, FiniteFunction, LawReport};
use rand::Rng;
use serde_json::json;

use super::{pairs, pick, sample_key};
use crate::config::SuiteConfig;
use crate::error::CliError;
use crate::report::Mode::{Exhaustive, Sampled};
use crate::runner::{Check, Job};

type Act = ActionInstance<FinSetCat>;

pub(crate) fn family_key(f: &IndexedFamily) -> String {
    let parts: Vec<String> = f.components().iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

pub fn indexed_equivalence(config: &SuiteConfig) -> Result<Vec<Job<'static>>, CliError> {
    let (n, entry_bound, ceiling) = (config.max_size, config.entry_bound, config.ceiling);
    let mut jobs = Vec::new();
    let cache = Arc::new(RowClassCache::new());
    let listed = pairs(config, || IndexedFamily::up_to(n, n))?;
    for p in &listed {
        let (s, t, cache) = (p.source.clone(), p.target.clone(), cache.clone());
        let key = format!("{}->{}", family_key(&s), family_key(&t));
        jobs.push(Job::new("classes", Exhaustive, key, move |_| {
            let classes = count_indexed_classes_cached(&s, &t, entry_bound, ceiling, &cache)?;
            let dlenses = count_dlens_hom(&s.container(), &t.container());
            Ok(Check::counts(
                "sliding classes = dependent lenses",
                classes,
                dlenses,
                json!({"entry_bound": entry_bound}),
            ))
        }));
    }
    if config.instances.is_some() {
        return Ok(jobs);
    }

    // the row decomposition behind `classes`, against the whole sliding graph
    let small = IndexedFamily::up_to(n, 1);
    for s in &small {
        for t in &small {
            let (s, t) = (s.clone(), t.clone());
            let key = format!("{}->{}", family_key(&s), family_key(&t));
            jobs.push(Job::new("full-graph", Exhaustive, key, move |_| {
                let g = IndexedSlidingGraph::build(&Act::cartesian(), &s, &t, 1, ceiling)?;
                let dlenses = count_dlens_hom(&s.container(), &t.container());
                Ok(Check::counts(
                    "components = dependent lenses",
                    g.component_count() as u128,
                    dlenses,
                    json!({"entry_bound": 1, "vertices": g.vertex_count(), "edges": g.edge_count()}),
                ))
            }));
        }
    }

    for (scope, fams, entry_bound) in exhaustive_scopes(n, entry_bound, entry_bound) {
        let fams = Arc::new(fams);
        for a in fams.iter() {
            for b in fams.iter() {
                let (a, b, all) = (a.clone(), b.clone(), fams.clone());
                let key = format!("{scope}:{}->{}", family_key(&a), family_key(&b));
                jobs.push(Job::new("functoriality-exhaustive", Exhaustive, key, move |_| {
                    let act = Act::cartesian();
                    let mut report = LawReport::new("iopt_to_dlens functor");
                    check_identity(&mut report, &a, &act)?;
                    let firsts = all_optics(&act, &a, &b, entry_bound, ceiling)?;
                    let d1s = firsts.iter().map(|o| iopt_to_dlens(o, &act)).collect::<Result<Vec<_>, _>>()?;
                    for c in all.iter() {
                        let seconds = all_optics(&act, &b, c, entry_bound, ceiling)?;
                        for (o1, d1) in firsts.iter().zip(&d1s) {
                            for o2 in &seconds {
                                check_pair(&mut report, o1, o2, d1, &act)?;
                            }
                        }
                    }
                    Ok(Check::new(report, json!({"scope": scope, "entry_bound": entry_bound})))
                }));
            }
        }
    }

    let fams = Arc::new(IndexedFamily::up_to(n, n));
    for i in 0..config.samples {
        let fams = fams.clone();
        jobs.push(Job::new("functoriality-sampled", Sampled, sample_key(i), move |rng| {
            let act = Act::cartesian();
            let mut report = LawReport::new("iopt_to_dlens functor");
            for _ in 0..20 {
                let (a, b, c) = (pick(rng, &fams), pick(rng, &fams), pick(rng, &fams));
                let (Some(o1), Some(o2)) =
                    (random_optic(rng, &act, a, b, entry_bound), random_optic(rng, &act, b, c, entry_bound))
                else {
                    continue;
                };
                check_identity(&mut report, a, &act)?;
                check_pair(&mut report, &o1, &o2, &iopt_to_dlens(&o1, &act)?, &act)?;
                break;
            }
            Ok(Check::new(report, serde_json::Value::Null))
        }));
    }
    Ok(jobs)
}

fn check_identity(report: &mut LawReport, a: &IndexedFamily, act: &Act) -> Result<(), fiboptic_core::Error> {
    let id = iopt_to_dlens(&act.identity_indexed(a), act)?;
    report.check(id == DepLens::identity(&a.container()), "identity", || json!({"family": a}));
    Ok(())
}

fn check_pair(
    report: &mut LawReport,
    o1: &IndexedOptic<FiniteFunction>,
    o2: &IndexedOptic<FiniteFunction>,
    d1: &DepLens,
    act: &Act,
) -> Result<(), fiboptic_core::Error> {
    let lhs = iopt_to_dlens(&iopt_compose(o1, o2, act)?, act)?;
    let rhs = d1.then(&iopt_to_dlens(o2, act)?)?;
    report.check(
        lhs == rhs,
        "composition",
        || json!({"first": o1, "second": o2, "normalised composite": lhs, "composite of normalised": rhs}),
    );
    Ok(())
}

/// Family sets on which composition is checked over every composable pair,
/// with their matrix entry bounds: one-index families with components up to
/// `n`, and families of up to `n` indices whose components have size at most 1.
pub(crate) fn exhaustive_scopes(
    n: usize,
    entry_bound: usize,
    small_entry_bound: usize,
) -> Vec<(&'static str, Vec<IndexedFamily>, usize)> {
    vec![
        ("one-index", IndexedFamily::up_to(1, n), entry_bound),
        ("small-components", IndexedFamily::up_to(n, 1), small_entry_bound.min(entry_bound)),
    ]
}

pub(crate) fn all_optics(
    act: &Act,
    a: &IndexedFamily,
    b: &IndexedFamily,
    entry_bound: usize,
    ceiling: usize,
) -> Result<Vec<IndexedOptic<FiniteFunction>>, fiboptic_core::Error> {
    let mut out = Vec::new();
    for m in ResidualMatrix::all(a.len(), b.len(), entry_bound) {
        out.extend(act.enumerate_indexed(a, b, &m, ceiling)?);
    }
    Ok(out)
}

pub(crate) fn random_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    entry_bound: usize,
) -> ResidualMatrix {
    let sizes: Vec<usize> = (0..rows * cols).map(|_| rng.gen_range(0..=entry_bound)).collect();
    ResidualMatrix::from_sizes(rows, cols, &sizes).expect("shape matches")
}

pub(crate) fn random_optic<R: Rng + ?Sized>(
    rng: &mut R,
    act: &Act,
    a: &IndexedFamily,
    b: &IndexedFamily,
    entry_bound: usize,
) -> Option<IndexedOptic<FiniteFunction>> {
    (0..20).find_map(|_| act.sample_indexed(a, b, &random_matrix(rng, a.len(), b.len(), entry_bound), rng))
}

pub fn polynomial_count(config: &SuiteConfig) -> Result<Vec<Job<'static>>, CliError> {
    let (n, ceiling) = (config.max_size, config.ceiling);
    let mut jobs = Vec::new();
    for p in pairs(config, || IndexedFamily::constant_up_to(n, n))? {
        let (s, t) = (p.source, p.target);
        let key = format!("{}->{}", family_key(&s), family_key(&t));
        jobs.push(Job::new("constant-families", Exhaustive, key, move |_| {
            let got = count_polynomial_nat(&s, &t, n, ceiling)?;
            let dlenses = count_dlens_hom(&s.container(), &t.container());
            Ok(Check::counts(
                "natural transformations = dependent lenses",
                got.count,
                dlenses,
                json!({"probe_bound": got.probe_bound, "probe_relative": got.probe_relative}),
            ))
        }));
    }
    Ok(jobs)
}
