use fiboptic_core::fincat::check_category_laws;
use fiboptic_core::lens::{
    count_dlens_hom, enumerate_dlens_hom, lens_compose, lens_to_dlens, DepLensCategory, LensCategory,
};
use fiboptic_core::{ActionInstance, Boundary, Container, DepLens, FinSetCat, FinStochCat, LawReport, Lens};
use rand::Rng;
use serde_json::json;

use super::{pairs, pick, random_fn, sample_key};
use crate::config::SuiteConfig;
use crate::error::CliError;
use crate::report::Mode::{Exhaustive, Sampled};
use crate::runner::{Check, Job};

pub fn fincat_laws(config: &SuiteConfig) -> Vec<Job<'static>> {
    let (n, ceiling) = (config.max_size, config.ceiling);
    let grid = config.denominators.clone();
    let laws = move |r: LawReport| {
        let data = json!({"category": r.name, "size_bound": n});
        Check::new(r, data)
    };
    let mut jobs = vec![
        Job::new("category-laws", Exhaustive, "finset", move |_| {
            Ok(laws(check_category_laws(&FinSetCat, "finset", n, ceiling)?))
        }),
        Job::new("category-laws", Exhaustive, "finstoch", {
            let grid = grid.clone();
            move |_| Ok(laws(check_category_laws(&FinStochCat::with_grid(grid.clone()), "finstoch", n, ceiling)?))
        }),
        Job::new("category-laws", Exhaustive, "lens", move |_| {
            Ok(laws(check_category_laws(&LensCategory, "lens", n, ceiling)?))
        }),
        Job::new("category-laws", Exhaustive, "dlens", move |_| {
            Ok(laws(check_category_laws(&DepLensCategory, "dlens", n, ceiling)?))
        }),
    ];
    jobs.push(Job::new("action-coherence", Exhaustive, "finset", move |_| {
        Ok(laws(ActionInstance::cartesian().check_coherence(n, ceiling)?))
    }));
    jobs.push(Job::new("action-coherence", Exhaustive, "finstoch", move |_| {
        Ok(laws(ActionInstance::stochastic(grid.clone()).check_coherence(n, ceiling)?))
    }));
    jobs
}

pub fn lens_laws(config: &SuiteConfig) -> Result<Vec<Job<'static>>, CliError> {
    let (n, ceiling) = (config.max_size, config.ceiling);
    let mut jobs = Vec::new();

    let containers = pairs(config, || Container::up_to(n))?;
    for p in containers {
        let key = format!("{:?}->{:?}", p.source.direction_sizes(), p.target.direction_sizes());
        jobs.push(Job::new("count-enumerate", Exhaustive, key, move |_| {
            let count = count_dlens_hom(&p.source, &p.target);
            let listed = enumerate_dlens_hom(&p.source, &p.target, ceiling)?;
            let distinct = listed.iter().collect::<std::collections::HashSet<_>>().len();
            let mut check = Check::counts("count = |enumeration|", count, listed.len() as u128, json!({}));
            check.report.check(
                distinct == listed.len(),
                "enumeration has no repeats",
                || json!({"distinct": distinct}),
            );
            Ok(check)
        }));
    }
    if config.instances.is_some() {
        return Ok(jobs);
    }

    let boundaries = Boundary::up_to(n);
    for s in &boundaries {
        for t in &boundaries {
            let (s, t) = (s.clone(), t.clone());
            jobs.push(Job::new("constant-formula", Exhaustive, format!("{s}->{t}"), move |_| {
                let formula = (t.view.size() as u128).pow(s.view.size() as u32)
                    * (s.update.size() as u128).pow((s.view.size() * t.update.size()) as u32);
                let containers =
                    count_dlens_hom(&Container::constant(&s.view, &s.update), &Container::constant(&t.view, &t.update));
                let mut check = Check::counts("constant containers count lenses", containers, formula, json!({}));
                let listed = Lens::enumerate(&s, &t, ceiling)?.len() as u128;
                check.report.check(listed == formula, "lens enumeration", || json!({"listed": listed.to_string()}));
                Ok(check)
            }));
        }
    }

    // lens_to_dlens preserves identities and composites, with the middle
    // boundary and the first lens ranging over everything
    for s in &boundaries {
        for m in &boundaries {
            let (s, m, all) = (s.clone(), m.clone(), boundaries.clone());
            jobs.push(Job::new("lens-to-dlens", Exhaustive, format!("{s}->{m}"), move |_| {
                let mut report = LawReport::new("lens_to_dlens functor");
                report.check(
                    lens_to_dlens(&Lens::identity(&s)) == DepLens::identity(&Container::constant(&s.view, &s.update)),
                    "identity",
                    || json!({"boundary": s}),
                );
                let firsts = Lens::enumerate(&s, &m, ceiling)?;
                for t in &all {
                    let seconds = Lens::enumerate(&m, t, ceiling)?;
                    for l1 in &firsts {
                        let d1 = lens_to_dlens(l1);
                        for l2 in &seconds {
                            let lhs = lens_to_dlens(&lens_compose(l1, l2)?);
                            let rhs = d1.then(&lens_to_dlens(l2))?;
                            report.check(lhs == rhs, "composition", || json!({"first": l1, "second": l2}));
                        }
                    }
                }
                Ok(Check::new(report, serde_json::Value::Null))
            }));
        }
    }

    // one size above the exhaustive bound
    let big = Boundary::up_to(n + 1);
    let big_containers = Container::up_to(n + 1);
    for i in 0..config.samples {
        let (big, big_containers) = (big.clone(), big_containers.clone());
        jobs.push(Job::new("lens-laws-above-bound", Sampled, sample_key(i), move |rng| {
            let mut report = LawReport::new("sampled lens laws");
            // redraw when a chain passes through an empty hom-set
            let drawn = (0..20).find_map(|_| {
                let b: Vec<&Boundary> = (0..4).map(|_| pick(rng, &big)).collect();
                let ls = (0..3).map(|k| random_lens(rng, b[k], b[k + 1])).collect::<Option<Vec<Lens>>>()?;
                Some((b, ls))
            });
            if let Some((b, ls)) = drawn {
                let l = ls[0].then(&ls[1])?.then(&ls[2])?;
                let r = ls[0].then(&ls[1].then(&ls[2])?)?;
                report.check(l == r, "lens associativity", || json!({"lenses": ls}));
                report.check(
                    Lens::identity(b[0]).then(&ls[0])? == ls[0],
                    "lens left identity",
                    || json!({"lens": ls[0]}),
                );
                report.check(
                    ls[0].then(&Lens::identity(b[1]))? == ls[0],
                    "lens right identity",
                    || json!({"lens": ls[0]}),
                );
            }
            let drawn = (0..20).find_map(|_| {
                let c: Vec<&Container> = (0..4).map(|_| pick(rng, &big_containers)).collect();
                let ds = (0..3).map(|k| random_dlens(rng, c[k], c[k + 1])).collect::<Option<Vec<DepLens>>>()?;
                Some((c, ds))
            });
            if let Some((c, ds)) = drawn {
                let l = ds[0].then(&ds[1])?.then(&ds[2])?;
                let r = ds[0].then(&ds[1].then(&ds[2])?)?;
                report.check(l == r, "dlens associativity", || json!({"dlenses": ds}));
                report.check(
                    DepLens::identity(c[0]).then(&ds[0])? == ds[0],
                    "dlens left identity",
                    || json!({"dlens": ds[0]}),
                );
                report.check(
                    ds[0].then(&DepLens::identity(c[1]))? == ds[0],
                    "dlens right identity",
                    || json!({"dlens": ds[0]}),
                );
            }
            Ok(Check::new(report, serde_json::Value::Null))
        }));
    }
    Ok(jobs)
}

fn random_lens<R: Rng + ?Sized>(rng: &mut R, s: &Boundary, t: &Boundary) -> Option<Lens> {
    let get = random_fn(rng, &s.view, &t.view)?;
    let put = random_fn(rng, &fiboptic_core::ProductWitness::new(&s.view, &t.update).carrier, &s.update)?;
    Lens::new(s.clone(), t.clone(), get, put).ok()
}

fn random_dlens<R: Rng + ?Sized>(rng: &mut R, s: &Container, t: &Container) -> Option<DepLens> {
    let forward = random_fn(rng, s.positions(), t.positions())?;
    let backward = (0..s.positions().size())
        .map(|a| random_fn(rng, t.direction(forward.apply(a)), s.direction(a)))
        .collect::<Option<Vec<_>>>()?;
    DepLens::new(s.clone(), t.clone(), forward, backward).ok()
}
