use super::*;
use crate::fincat::{FinStochCat, FiniteKernel, Rational};
use crate::lens::lens_compose;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn set(n: usize) -> FinSet {
    FinSet::new(n)
}

fn func(dom: usize, cod: usize, table: &[usize]) -> FiniteFunction {
    FiniteFunction::new(set(dom), set(cod), table.to_vec()).unwrap()
}

fn random_optic(rng: &mut ChaCha8Rng, s: &Boundary, t: &Boundary, m: usize) -> Optic<FiniteFunction> {
    let my = m * t.view.size();
    let ym = t.update.size() * m;
    let f: Vec<usize> = (0..s.view.size()).map(|_| rng.gen_range(0..my)).collect();
    let b: Vec<usize> = (0..ym).map(|_| rng.gen_range(0..s.update.size())).collect();
    Optic::new(s.clone(), t.clone(), set(m), func(s.view.size(), my, &f), func(ym, s.update.size(), &b)).unwrap()
}

#[test]
fn coherence_of_both_actions() {
    let r = ActionInstance::cartesian().check_coherence(2, 1_000_000).unwrap();
    assert!(r.passed() && r.checked > 0);
    let r = ActionInstance::stochastic(vec![1, 2]).check_coherence(2, 1_000_000).unwrap();
    assert!(r.passed());
}

#[test]
fn identity_optic_normalizes_to_identity_lens() {
    let act = ActionInstance::cartesian();
    for b in Boundary::up_to(2) {
        let id = act.identity_optic(&b);
        assert_eq!(normalize_cartesian(&id, &act).unwrap(), Lens::identity(&b));
    }
}

#[test]
fn composing_with_identity_is_exact() {
    let act = ActionInstance::cartesian();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (s, t) = (Boundary::sized(2, 2), Boundary::sized(2, 1));
    let o = random_optic(&mut rng, &s, &t, 2);
    let right = optic_compose(&o, &act.identity_optic(&t), &act).unwrap();
    assert_eq!(right, o);
    let left = optic_compose(&act.identity_optic(&s), &o, &act).unwrap();
    assert_eq!(left, o);
    assert!(optic_equiv(&right, &o, 2, &act).unwrap());
    let ids = optic_compose(&act.identity_optic(&s), &act.identity_optic(&s), &act).unwrap();
    assert_eq!(ids, act.identity_optic(&s));
}

#[test]
fn composition_collapses_to_lens_composition() {
    let act = ActionInstance::cartesian();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let bs = Boundary::up_to(2);
    for a in &bs {
        for b in &bs {
            for c in &bs {
                for m in 0..=2 {
                    for n in 0..=2 {
                        if (a.view.size() > 0 && m * b.view.size() == 0)
                            || (b.view.size() > 0 && n * c.view.size() == 0)
                            || (a.update.size() == 0 && b.update.size() * m > 0)
                            || (b.update.size() == 0 && c.update.size() * n > 0)
                        {
                            continue;
                        }
                        let o1 = random_optic(&mut rng, a, b, m);
                        let o2 = random_optic(&mut rng, b, c, n);
                        let lhs = normalize_cartesian(&optic_compose(&o1, &o2, &act).unwrap(), &act).unwrap();
                        let rhs = lens_compose(
                            &normalize_cartesian(&o1, &act).unwrap(),
                            &normalize_cartesian(&o2, &act).unwrap(),
                        )
                        .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}

#[test]
fn copy_optic_normalizes_to_its_lens() {
    let l = Lens::from_fns(Boundary::sized(2, 2), Boundary::sized(1, 2), |_| 0, |x, y| x ^ y).unwrap();
    let o = optic_of_lens(&l);
    assert_eq!(o.residual().size(), 2);
    assert_eq!(o.forward().table(), &[0, 1]);
    assert_eq!(normalize_cartesian(&o, &ActionInstance::cartesian()).unwrap(), l);
}

#[test]
fn slide_along_identity_is_trivial() {
    let act = ActionInstance::cartesian();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let o = random_optic(&mut rng, &Boundary::sized(2, 2), &Boundary::sized(2, 2), 2);
    let id = FiniteFunction::identity(&set(2));
    for dir in [SlideDirection::Forward, SlideDirection::Backward] {
        let e = slide(&o, &id, dir, &act).unwrap();
        assert_eq!(e.from, o);
        assert_eq!(e.to, o);
        assert!(act.is_sliding_edge(&e));
    }
}

#[test]
fn slide_to_the_terminal_residual() {
    let act = ActionInstance::cartesian();
    let (s, t) = (Boundary::sized(2, 2), Boundary::sized(2, 2));
    // backward ignores the residual: (y', m) ↦ 1 - y'
    let o = Optic::new(s, t, set(2), func(2, 4, &[1, 2]), func(4, 2, &[1, 1, 0, 0])).unwrap();
    let bang = func(2, 1, &[0, 0]);
    let e = slide(&o, &bang, SlideDirection::Forward, &act).unwrap();
    assert_eq!(e.to.residual().size(), 1);
    assert_eq!(e.to.backward().table(), &[1, 0]);
    assert_eq!(e.to.forward().table(), &[1, 0]);
    assert!(act.is_sliding_edge(&e));
    assert_eq!(normalize_cartesian(&e.to, &act).unwrap(), normalize_cartesian(&o, &act).unwrap());

    let depends =
        Optic::new(o.source().clone(), o.target().clone(), set(2), o.forward().clone(), func(4, 2, &[0, 1, 0, 1]))
            .unwrap();
    assert!(matches!(slide(&depends, &bang, SlideDirection::Forward, &act), Err(Error::SlideUndetermined(_))));
    assert!(matches!(slide(&o, &func(1, 2, &[0]), SlideDirection::Forward, &act), Err(Error::Mismatch(_))));
}

#[test]
fn slides_compose() {
    let act = ActionInstance::cartesian();
    let sizes = [0usize, 1, 2];
    let mut checked = 0;
    for (s, t) in Boundary::up_to(2).iter().flat_map(|s| Boundary::up_to(2).into_iter().map(move |t| (s.clone(), t))) {
        for &m in &sizes {
            for o in act.enumerate_optics(&s, &t, &set(m), 1_000_000).unwrap() {
                for &n in &sizes {
                    for r in FiniteFunction::enumerate(&set(m), &set(n), 100).unwrap() {
                        for &p in &sizes {
                            for q in FiniteFunction::enumerate(&set(n), &set(p), 100).unwrap() {
                                let Ok(e1) = slide(&o, &r, SlideDirection::Forward, &act) else { continue };
                                let Ok(e2) = slide(&e1.to, &q, SlideDirection::Forward, &act) else { continue };
                                let e = slide(&o, &r.then(&q).unwrap(), SlideDirection::Forward, &act).unwrap();
                                assert_eq!(e.to, e2.to);
                                let rq = r.then(&q).unwrap();
                                if rq.is_injective() {
                                    let back = slide(&e.to, &rq, SlideDirection::Backward, &act).unwrap();
                                    assert_eq!(back.from, o);
                                }
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn collapse_at_two_two_two_two() {
    let act = ActionInstance::cartesian();
    let b = Boundary::sized(2, 2);
    let g = SlidingGraph::build(&act, &b, &b, 2, 1_000_000).unwrap();
    assert_eq!(g.vertex_count(), 272);
    assert_eq!(g.edge_count(), 1232);
    assert_eq!(g.component_count(), 64);
    assert_eq!(count_cartesian_representatives(&b, &b, 2), 272);
    // every edge satisfies the sliding equations
    for i in 0..g.edge_count() {
        assert!(act.is_sliding_edge(&g.edge(i)));
    }
    // components are exactly the fibres of normalization
    let labels = g.labels();
    let lenses: Vec<Lens> = g.vertices().iter().map(|o| normalize_cartesian(o, &act).unwrap()).collect();
    for i in 0..lenses.len() {
        for j in 0..lenses.len() {
            assert_eq!(labels[i] == labels[j], lenses[i] == lenses[j]);
        }
    }
}

#[test]
fn equivalence_by_normal_form() {
    let act = ActionInstance::cartesian();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let b = Boundary::sized(2, 2);
    for _ in 0..30 {
        let (m, n) = (1 + rng.gen_range(0..2), 1 + rng.gen_range(0..2));
        let o1 = random_optic(&mut rng, &b, &b, m);
        let o2 = random_optic(&mut rng, &b, &b, n);
        let same = normalize_cartesian(&o1, &act).unwrap() == normalize_cartesian(&o2, &act).unwrap();
        assert_eq!(optic_equiv(&o1, &o2, 2, &act).unwrap(), same);
        match optic_equiv_witness(&o1, &o2, 2, &act).unwrap() {
            Equivalence::Connected { path } => {
                assert!(same);
                assert!(path.iter().all(|e| act.is_sliding_edge(e)));
            }
            Equivalence::NotConnectedWithinBound => assert!(!same),
        }
    }
    let big = random_optic(&mut rng, &b, &b, 3);
    assert!(matches!(optic_equiv(&big, &big, 2, &act), Err(Error::ResidualBound { .. })));
}

#[test]
fn stochastic_optics() {
    let act = ActionInstance::stochastic(vec![1, 2]);
    let k = &act.category;
    let b = Boundary::sized(1, 2);
    let half = Rational::new(1, 2).unwrap();
    let f = FiniteKernel::from_weights(set(1), set(2), vec![vec![half, half]]).unwrap();
    let back = k.from_function(&func(4, 2, &[0, 1, 1, 0]));
    let o = Optic::new(b.clone(), Boundary::sized(1, 2), set(2), f, back).unwrap();
    assert_eq!(optic_compose(&o, &act.identity_optic(o.target()), &act).unwrap(), o);
    assert!(optic_equiv(&o, &optic_compose(&act.identity_optic(&b), &o, &act).unwrap(), 2, &act).unwrap());
    assert!(matches!(normalize_cartesian(&o, &act), Err(Error::Unsupported(_))));
    let g = SlidingGraph::build(&act, &b, &Boundary::sized(1, 1), 1, 1_000_000).unwrap();
    assert!(g.component_count() <= g.vertex_count());
    let _: &FinStochCat = k;
}

#[test]
fn json_round_trip() {
    let act = ActionInstance::cartesian();
    let o = act.identity_optic(&Boundary::sized(2, 1));
    let s = serde_json::to_string(&o).unwrap();
    assert_eq!(serde_json::from_str::<Optic<FiniteFunction>>(&s).unwrap(), o);
    let bad = s.replace("\"residual\":{\"size\":1}", "\"residual\":{\"size\":2}");
    assert!(serde_json::from_str::<Optic<FiniteFunction>>(&bad).is_err());
}
