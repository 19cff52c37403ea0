use std::sync::Arc;

use fiboptic_core::fibre::{
    backward_object, check_adjunction, check_beck_chevalley, fibre_optic_compose, fibre_to_indexed, forward_object,
    identity_fibre_optic, indexed_to_fibre, sample_fibre_optic, validate_dmark, Bifibration, DMark, DMarkMorphism,
    DMarkObject, Fam, FamObject, FibreBoundary, FibreOpticOf, PullbackSquare,
};
use fiboptic_core::indexed::{iopt_compose, IndexedFamily, IndexedOptic, ResidualMatrix};
use fiboptic_core::optic::optic_compose;
use fiboptic_core::{
    ActionInstance, Boundary, FinSet, FinSetCat, FiniteFunction, FiniteKernel, LawReport, Morphism, Optic, Rational,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::indexed::{all_optics, exhaustive_scopes, family_key, random_optic};
use super::{pick, sample_key};
use crate::config::SuiteConfig;
use crate::report::Mode::{Exhaustive, Sampled};
use crate::runner::{Check, Job};

fn map_key(f: &FiniteFunction) -> String {
    format!("{}->{}{:?}", f.dom().size(), f.cod().size(), f.table())
}

fn bundle_key(x: &DMarkObject) -> String {
    format!("{:?}/{}", x.bundle.table(), x.base().size())
}

/// Base maps `I → J` between sets of size at most `n`.
fn base_maps(n: usize, ceiling: usize) -> Vec<FiniteFunction> {
    let sets = FinSet::up_to(n);
    let mut out = Vec::new();
    for i in &sets {
        for j in &sets {
            out.extend(FiniteFunction::enumerate(i, j, ceiling).unwrap_or_default());
        }
    }
    out
}

pub fn beck_chevalley(config: &SuiteConfig) -> Vec<Job<'static>> {
    let (n, ceiling) = (config.max_size, config.ceiling);
    let dmark = DMark::with_grid(config.denominators.clone());
    let mut jobs = Vec::new();
    for f in base_maps(n, ceiling) {
        let g = f.clone();
        jobs.push(Job::new("adjunction-fam", Exhaustive, map_key(&f), move |_| {
            let mut report = LawReport::new("fam adjunction");
            for x in Fam.objects_over(g.dom(), n) {
                for z in Fam.objects_over(g.cod(), n) {
                    report.absorb(check_adjunction(&Fam, &g, &x, &z, ceiling)?);
                    // Π_j |Z_j|^(Σ_{f(i)=j} |X_i|)
                    let expect: u128 = g
                        .cod()
                        .elements()
                        .map(|j| {
                            let e: usize = g.fibre(j).iter().map(|&i| x.component(i).size()).sum();
                            (z.component(j).size() as u128).pow(e as u32)
                        })
                        .product();
                    let got = Fam.hom_count(&x, &Fam.pullback(&g, &z)?);
                    report.check(got == expect, "hom-set size", || json!({"x": x, "z": z, "count": got.to_string()}));
                }
            }
            Ok(Check::new(report, Value::Null))
        }));
        let d = dmark.clone();
        jobs.push(Job::new("adjunction-dmark", Exhaustive, map_key(&f), move |_| {
            let mut report = LawReport::new("dmark adjunction");
            for x in d.objects_over(f.dom(), n) {
                for z in d.objects_over(f.cod(), n) {
                    report.absorb(check_adjunction(&d, &f, &x, &z, ceiling)?);
                }
            }
            Ok(Check::new(report, Value::Null))
        }));
    }
    for (i, sq) in PullbackSquare::enumerate(n).into_iter().enumerate() {
        let data = json!({"p": sq.p, "q": sq.q, "f": sq.f, "g": sq.g});
        let key = format!("square-{i:03}");
        let (s, d) = (sq.clone(), data.clone());
        jobs.push(Job::new("beck-chevalley-fam", Exhaustive, key.clone(), move |_| {
            Ok(Check::new(check_beck_chevalley(&Fam, &s, n)?, d.clone()))
        }));
        let inst = dmark.clone();
        jobs.push(Job::new("beck-chevalley-dmark", Exhaustive, key, move |_| {
            Ok(Check::new(check_beck_chevalley(&inst, &sq, n)?, data.clone()))
        }));
    }
    jobs
}

/// `Σ_b k(a)(b)·[p_B(b) = f(p_A(a))] = 1` for every `a`.
fn mass_oracle(m: &DMarkMorphism, src: &DMarkObject, tgt: &DMarkObject) -> bool {
    src.carrier().elements().all(|a| {
        let mass: Rational = tgt
            .carrier()
            .elements()
            .filter(|&b| tgt.project(b) == m.base_map.apply(src.project(a)))
            .map(|b| m.kernel.weight(a, b))
            .sum();
        mass.is_one()
    })
}

fn grid_morphisms(src: &DMarkObject, tgt: &DMarkObject, grid: &[u32], ceiling: usize) -> Vec<DMarkMorphism> {
    let mut out = Vec::new();
    for f in FiniteFunction::enumerate(src.base(), tgt.base(), ceiling).unwrap_or_default() {
        for k in FiniteKernel::grid(src.carrier(), tgt.carrier(), grid, ceiling).unwrap_or_default() {
            out.push(DMarkMorphism { kernel: k, base_map: f.clone() });
        }
    }
    out
}

pub fn dmark_validity(config: &SuiteConfig) -> Vec<Job<'static>> {
    let (n, ceiling) = (config.max_size, config.ceiling);
    let grid = config.denominators.clone();
    let d = DMark::with_grid(grid.clone());
    let objects: Arc<Vec<DMarkObject>> = Arc::new(FinSet::up_to(n).iter().flat_map(|b| d.objects_over(b, n)).collect());
    // the valid morphisms by the mass oracle, per ordered pair of objects
    let valid: Arc<Vec<Vec<Vec<DMarkMorphism>>>> = Arc::new(
        objects
            .par_iter()
            .map(|a| {
                objects
                    .iter()
                    .map(|b| {
                        grid_morphisms(a, b, &grid, ceiling).into_iter().filter(|m| mass_oracle(m, a, b)).collect()
                    })
                    .collect()
            })
            .collect(),
    );
    let mut jobs = Vec::new();
    for (ia, a) in objects.iter().enumerate() {
        for (ib, b) in objects.iter().enumerate() {
            let key = format!("{}->{}", bundle_key(a), bundle_key(b));
            let (a, b, g) = (a.clone(), b.clone(), grid.clone());
            jobs.push(Job::new("oracle", Exhaustive, key.clone(), move |_| {
                let mut report = LawReport::new("validate_dmark against the mass oracle");
                let mut accepted = 0;
                for m in grid_morphisms(&a, &b, &g, ceiling) {
                    let got = validate_dmark(&m, &a, &b)?;
                    accepted += got as usize;
                    report.check(
                        got == mass_oracle(&m, &a, &b),
                        "validity",
                        || json!({"morphism": m, "violations": m.support_violations(&a, &b).ok()}),
                    );
                }
                Ok(Check::new(report, json!({"accepted": accepted})))
            }));
            let (objects, valid) = (objects.clone(), valid.clone());
            jobs.push(Job::new("closure", Exhaustive, key, move |_| {
                let mut report = LawReport::new("closure under composition");
                for (ic, c) in objects.iter().enumerate() {
                    for m1 in &valid[ia][ib] {
                        for m2 in &valid[ib][ic] {
                            let m = m1.then(m2)?;
                            report.check(
                                validate_dmark(&m, &objects[ia], c)?,
                                "composite is valid",
                                || json!({"first": m1, "second": m2, "composite": m}),
                            );
                        }
                    }
                }
                Ok(Check::new(report, Value::Null))
            }));
        }
    }
    jobs
}

fn fam_boundary(f: &IndexedFamily) -> FibreBoundary<FamObject> {
    FibreBoundary {
        view: FamObject::new(f.index().clone(), f.views()).expect("one fibre per index"),
        update: FamObject::new(f.index().clone(), f.updates()).expect("one fibre per index"),
    }
}

/// `Π_i |Σ_j M_ij·|Y_j||^|X_i| · |X'_i|^(Σ_j |Y'_j|·M_ij)`.
fn indexed_hom_size(a: &IndexedFamily, b: &IndexedFamily, m: &ResidualMatrix) -> u128 {
    let mut total: u128 = 1;
    for (i, x) in a.components().iter().enumerate() {
        let fwd: usize = b.components().iter().enumerate().map(|(j, y)| m.entry(i, j).size() * y.view.size()).sum();
        let bwd: usize = b.components().iter().enumerate().map(|(j, y)| m.entry(i, j).size() * y.update.size()).sum();
        total = total
            .saturating_mul((fwd as u128).saturating_pow(x.view.size() as u32))
            .saturating_mul((x.update.size() as u128).saturating_pow(bwd as u32));
    }
    total
}

fn as_plain(o: &FibreOpticOf<DMark>) -> Result<Optic<FiniteKernel>, fiboptic_core::Error> {
    let b = |x: &FibreBoundary<DMarkObject>| Boundary::new(x.view.carrier().clone(), x.update.carrier().clone());
    Optic::new(b(&o.source), b(&o.target), o.residual.carrier().clone(), o.forward.map.clone(), o.backward.map.clone())
}

pub fn specialise(config: &SuiteConfig) -> Vec<Job<'static>> {
    let (n, entry_bound, ceiling) = (config.max_size, config.entry_bound, config.ceiling);
    let act = ActionInstance::<FinSetCat>::cartesian();
    let fams = Arc::new(IndexedFamily::up_to(n, n));
    let mut jobs = Vec::new();

    for a in fams.iter() {
        let a = a.clone();
        jobs.push(Job::new("identity", Exhaustive, family_key(&a), move |_| {
            let mut report = LawReport::new("identity fibre optic");
            let id = fibre_to_indexed(&identity_fibre_optic(&Fam, &fam_boundary(&a))?)?;
            report.check(id == ActionInstance::cartesian().identity_indexed(&a), "identity", || json!({"family": a}));
            Ok(Check::new(report, Value::Null))
        }));
    }

    // both sides of the correspondence have the same size for every residual
    for a in fams.iter() {
        let (a, all) = (a.clone(), fams.clone());
        jobs.push(Job::new("hom-size", Exhaustive, family_key(&a), move |_| {
            let mut report = LawReport::new("fibre and indexed hom sizes");
            let src = fam_boundary(&a);
            for b in all.iter() {
                let tgt = fam_boundary(b);
                for m in ResidualMatrix::all(a.len(), b.len(), entry_bound) {
                    let sizes: Vec<usize> = m.sizes().concat();
                    let residual = FamObject::from_sizes(&sizes);
                    let fwd = forward_object(&Fam, a.index(), b.index(), &residual, &tgt.view)?;
                    let bwd = backward_object(&Fam, a.index(), b.index(), &residual, &tgt.update)?;
                    let fibre = Fam.hom_count(&src.view, &fwd).saturating_mul(Fam.hom_count(&bwd, &src.update));
                    let indexed = indexed_hom_size(&a, b, &m);
                    report.check(fibre == indexed, "hom size", || {
                        json!({"target": b, "matrix": m, "fibre": fibre.to_string(), "indexed": indexed.to_string()})
                    });
                }
            }
            Ok(Check::new(report, Value::Null))
        }));
    }

    // round trips on every optic in the exhaustive scopes
    for (scope, scoped, entry_bound) in exhaustive_scopes(n, entry_bound, entry_bound) {
        for a in &scoped {
            for b in &scoped {
                let (a, b) = (a.clone(), b.clone());
                let key = format!("{scope}:{}->{}", family_key(&a), family_key(&b));
                jobs.push(Job::new("round-trip", Exhaustive, key, move |_| {
                    let mut report = LawReport::new("indexed_to_fibre and fibre_to_indexed are inverse");
                    let mut images = std::collections::HashSet::new();
                    let optics = all_optics(&act, &a, &b, entry_bound, ceiling)?;
                    for o in &optics {
                        let f = indexed_to_fibre(o)?;
                        report.check(
                            fibre_to_indexed(&f)? == *o,
                            "fibre_to_indexed ∘ indexed_to_fibre",
                            || json!({"optic": o}),
                        );
                        report.check(
                            indexed_to_fibre(&fibre_to_indexed(&f)?)? == f,
                            "indexed_to_fibre ∘ fibre_to_indexed",
                            || json!({"optic": o}),
                        );
                        images.insert(f);
                    }
                    report.check(
                        images.len() == optics.len(),
                        "injective",
                        || json!({"images": images.len(), "optics": optics.len()}),
                    );
                    Ok(Check::new(report, json!({"optics": optics.len(), "entry_bound": entry_bound})))
                }));
            }
        }
    }

    // fibre composition is slower, so the many-index scope keeps entries ≤ 1
    for (scope, scoped, entry_bound) in exhaustive_scopes(n, entry_bound, 1) {
        let scoped = Arc::new(scoped);
        for a in scoped.iter() {
            for b in scoped.iter() {
                let (a, b, all) = (a.clone(), b.clone(), scoped.clone());
                let key = format!("{scope}:{}->{}", family_key(&a), family_key(&b));
                jobs.push(Job::new("composition-exhaustive", Exhaustive, key, move |_| {
                    let mut report = LawReport::new("fibre composition = indexed composition");
                    let firsts = all_optics(&act, &a, &b, entry_bound, ceiling)?;
                    let f1s = firsts.iter().map(indexed_to_fibre).collect::<Result<Vec<_>, _>>()?;
                    for c in all.iter() {
                        let seconds = all_optics(&act, &b, c, entry_bound, ceiling)?;
                        let f2s = seconds.iter().map(indexed_to_fibre).collect::<Result<Vec<_>, _>>()?;
                        for (o1, f1) in firsts.iter().zip(&f1s) {
                            for (o2, f2) in seconds.iter().zip(&f2s) {
                                check_composition(&mut report, o1, f1, o2, f2, &act)?;
                            }
                        }
                    }
                    Ok(Check::new(report, json!({"scope": scope, "entry_bound": entry_bound})))
                }));
            }
        }
    }

    for i in 0..config.samples {
        let all = fams.clone();
        jobs.push(Job::new("composition-sampled", Sampled, sample_key(i), move |rng| {
            let mut report = LawReport::new("fibre composition = indexed composition");
            for _ in 0..20 {
                let (a, b, c) = (pick(rng, &all), pick(rng, &all), pick(rng, &all));
                let (Some(o1), Some(o2)) =
                    (random_optic(rng, &act, a, b, entry_bound), random_optic(rng, &act, b, c, entry_bound))
                else {
                    continue;
                };
                let (f1, f2) = (indexed_to_fibre(&o1)?, indexed_to_fibre(&o2)?);
                report.check(fibre_to_indexed(&f1)? == o1, "round trip", || json!({"optic": o1}));
                check_composition(&mut report, &o1, &f1, &o2, &f2, &act)?;
                break;
            }
            Ok(Check::new(report, Value::Null))
        }));
    }

    // DMark over a one-point base is the plain stochastic optic category
    let grid = config.denominators.clone();
    for i in 0..config.samples {
        let grid = grid.clone();
        jobs.push(Job::new("dmark-point-sampled", Sampled, sample_key(i), move |rng| {
            let d = DMark::with_grid(grid.clone());
            let stoch = ActionInstance::stochastic(grid.clone());
            let mut report = LawReport::new("dmark over a point = stochastic optics");
            let point = |k: usize| DMarkObject::from_table(1, &vec![0; k]).expect("bundle over a point");
            for _ in 0..20 {
                let b: Vec<FibreBoundary<DMarkObject>> = (0..3)
                    .map(|_| FibreBoundary {
                        view: point(rand::Rng::gen_range(rng, 0..=n)),
                        update: point(rand::Rng::gen_range(rng, 0..=n)),
                    })
                    .collect();
                let m1 = point(rand::Rng::gen_range(rng, 0..=entry_bound));
                let m2 = point(rand::Rng::gen_range(rng, 0..=entry_bound));
                let (Some(o1), Some(o2)) =
                    (sample_fibre_optic(&d, &b[0], &b[1], &m1, rng)?, sample_fibre_optic(&d, &b[1], &b[2], &m2, rng)?)
                else {
                    continue;
                };
                let composite = as_plain(&fibre_optic_compose(&o1, &o2, &d)?)?;
                let expect = optic_compose(&as_plain(&o1)?, &as_plain(&o2)?, &stoch)?;
                report.check(composite == expect, "composition", || json!({"first": o1, "second": o2}));
                let id = as_plain(&identity_fibre_optic(&d, &b[0])?)?;
                report.check(
                    id == stoch.identity_optic(as_plain(&o1)?.source()),
                    "identity",
                    || json!({"boundary": b[0]}),
                );
                break;
            }
            Ok(Check::new(report, Value::Null))
        }));
    }
    jobs
}

fn check_composition(
    report: &mut LawReport,
    o1: &IndexedOptic<FiniteFunction>,
    f1: &FibreOpticOf<Fam>,
    o2: &IndexedOptic<FiniteFunction>,
    f2: &FibreOpticOf<Fam>,
    act: &ActionInstance<FinSetCat>,
) -> Result<(), fiboptic_core::Error> {
    let fibre = fibre_optic_compose(f1, f2, &Fam)?;
    let got = fibre_to_indexed(&fibre)?;
    let want = iopt_compose(o1, o2, act)?;
    report.check(got == want, "composition", || json!({"first": o1, "second": o2}));
    Ok(())
}
