use super::*;
use crate::fincat::FinSetCat;
use crate::lens::{count_dlens_hom, dlens_compose, lens_to_dlens};
use crate::optic::{normalize_cartesian, optic_compose};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Act = ActionInstance<FinSetCat>;

fn fam(parts: &[(usize, usize)]) -> IndexedFamily {
    IndexedFamily::from_components(parts.iter().map(|&(v, u)| Boundary::sized(v, u)).collect())
}

fn sample(
    act: &Act,
    rng: &mut ChaCha8Rng,
    src: &IndexedFamily,
    tgt: &IndexedFamily,
    bound: usize,
) -> Option<IndexedOptic<FiniteFunction>> {
    for _ in 0..20 {
        let sizes: Vec<usize> = (0..src.len() * tgt.len()).map(|_| rng.gen_range(0..=bound)).collect();
        let m = ResidualMatrix::from_sizes(src.len(), tgt.len(), &sizes).unwrap();
        if let Some(o) = act.sample_indexed(src, tgt, &m, rng) {
            return Some(o);
        }
    }
    None
}

#[test]
fn identity_matrices() {
    let act = Act::cartesian();
    assert_eq!(identity_matrix(&FinSet::new(1), &act).sizes(), vec![vec![1]]);
    assert_eq!(identity_matrix(&FinSet::new(2), &act).sizes(), vec![vec![1, 0], vec![0, 1]]);
}

#[test]
fn matrix_products() {
    let act = Act::cartesian();
    let m = ResidualMatrix::from_sizes(1, 2, &[2, 1]).unwrap();
    let n = ResidualMatrix::from_sizes(2, 1, &[2, 2]).unwrap();
    assert_eq!(matrix_multiply(&m, &n, &act).unwrap().sizes(), vec![vec![2 * 2 + 2]]);
    let one = ResidualMatrix::from_sizes(1, 1, &[2]).unwrap();
    let other = ResidualMatrix::from_sizes(1, 1, &[3]).unwrap();
    assert_eq!(matrix_multiply(&one, &other, &act).unwrap().sizes(), vec![vec![6]]);
    assert!(matrix_multiply(&m, &m, &act).is_err());
    for a in ResidualMatrix::all(2, 2, 2) {
        let id = identity_matrix(&FinSet::new(2), &act);
        assert_eq!(matrix_multiply(&a, &id, &act).unwrap(), a);
        assert_eq!(matrix_multiply(&id, &a, &act).unwrap(), a);
    }
    let ms = ResidualMatrix::all(2, 2, 1);
    for a in &ms {
        for b in &ms {
            for c in &ms {
                let l = matrix_multiply(&matrix_multiply(a, b, &act).unwrap(), c, &act).unwrap();
                let r = matrix_multiply(a, &matrix_multiply(b, c, &act).unwrap(), &act).unwrap();
                // oracle: Σ_{j,k} a_ij b_jk c_kl
                for i in 0..2 {
                    for l2 in 0..2 {
                        let mut expect = 0;
                        for j in 0..2 {
                            for k in 0..2 {
                                expect += a.entry(i, j).size() * b.entry(j, k).size() * c.entry(k, l2).size();
                            }
                        }
                        assert_eq!(l.entry(i, l2).size(), expect);
                        assert_eq!(r.entry(i, l2).size(), expect);
                    }
                }
            }
        }
    }
}

#[test]
fn identity_is_a_unit() {
    let act = Act::cartesian();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let fams = IndexedFamily::up_to(2, 2);
    for src in &fams {
        for tgt in &fams {
            if let Some(o) = sample(&act, &mut rng, src, tgt, 2) {
                assert_eq!(iopt_compose(&act.identity_indexed(src), &o, &act).unwrap(), o);
                assert_eq!(iopt_compose(&o, &act.identity_indexed(tgt), &act).unwrap(), o);
            }
        }
        let id = act.identity_indexed(src);
        assert_eq!(iopt_to_dlens(&id, &act).unwrap(), DepLens::identity(&src.container()));
    }
}

#[test]
fn singletons_agree_with_plain_optics() {
    let act = Act::cartesian();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let bs = Boundary::up_to(2);
    for a in &bs {
        for b in &bs {
            for c in &bs {
                let (s, t, u) = (
                    IndexedFamily::singleton(a.clone()),
                    IndexedFamily::singleton(b.clone()),
                    IndexedFamily::singleton(c.clone()),
                );
                let (Some(o1), Some(o2)) = (sample(&act, &mut rng, &s, &t, 2), sample(&act, &mut rng, &t, &u, 2))
                else {
                    continue;
                };
                let (p1, p2) = (o1.to_optic().unwrap(), o2.to_optic().unwrap());
                let composite = iopt_compose(&o1, &o2, &act).unwrap();
                assert_eq!(composite.to_optic().unwrap(), optic_compose(&p1, &p2, &act).unwrap());
                assert_eq!(IndexedOptic::from_optic(&p1), o1);
                let lens = normalize_cartesian(&p1, &act).unwrap();
                assert_eq!(iopt_to_dlens(&o1, &act).unwrap(), lens_to_dlens(&lens));
            }
        }
    }
}

#[test]
fn normalization_is_functorial_on_samples() {
    let act = Act::cartesian();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let fams = IndexedFamily::up_to(2, 1);
    for a in &fams {
        for b in &fams {
            for c in &fams {
                let (Some(o1), Some(o2)) = (sample(&act, &mut rng, a, b, 2), sample(&act, &mut rng, b, c, 2)) else {
                    continue;
                };
                let lhs = iopt_to_dlens(&iopt_compose(&o1, &o2, &act).unwrap(), &act).unwrap();
                let rhs =
                    dlens_compose(&iopt_to_dlens(&o1, &act).unwrap(), &iopt_to_dlens(&o2, &act).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn associative_up_to_normalization() {
    let act = Act::cartesian();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let fams = IndexedFamily::up_to(2, 1);
    for _ in 0..300 {
        let pick = |rng: &mut ChaCha8Rng| fams[rng.gen_range(0..fams.len())].clone();
        let (a, b, c, d) = (pick(&mut rng), pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let (Some(o1), Some(o2), Some(o3)) =
            (sample(&act, &mut rng, &a, &b, 2), sample(&act, &mut rng, &b, &c, 2), sample(&act, &mut rng, &c, &d, 2))
        else {
            continue;
        };
        let l = iopt_compose(&iopt_compose(&o1, &o2, &act).unwrap(), &o3, &act).unwrap();
        let r = iopt_compose(&o1, &iopt_compose(&o2, &o3, &act).unwrap(), &act).unwrap();
        assert_eq!(iopt_to_dlens(&l, &act).unwrap(), iopt_to_dlens(&r, &act).unwrap());
        assert_eq!(l.matrix().sizes(), r.matrix().sizes());
    }
}

#[test]
fn row_counts_match_the_formula() {
    let bs = Boundary::up_to(2);
    for s in &bs {
        for t in IndexedFamily::up_to(2, 2) {
            let got = row_class_count(s, t.components(), 2, 1_000_000).unwrap();
            let per_x: u64 = t
                .components()
                .iter()
                .map(|c| (s.update.size() as u64).pow(c.update.size() as u32) * c.view.size() as u64)
                .sum();
            assert_eq!(got, per_x.pow(s.view.size() as u32), "{s} {t:?}");
        }
    }
}

#[test]
fn row_counts_agree_with_the_full_graph() {
    let act = Act::cartesian();
    let fams = IndexedFamily::up_to(2, 1);
    for src in &fams {
        for tgt in &fams {
            let full = IndexedSlidingGraph::build(&act, src, tgt, 1, 1_000_000).unwrap();
            let rows = count_indexed_classes(src, tgt, 1, 1_000_000).unwrap();
            assert_eq!(full.component_count() as u128, rows, "{src:?} {tgt:?}");
            assert_eq!(rows, count_dlens_hom(&src.container(), &tgt.container()));
        }
    }
    let b = IndexedFamily::singleton(Boundary::sized(2, 2));
    assert_eq!(row_class_count(&Boundary::sized(2, 2), b.components(), 2, 1_000_000).unwrap(), 64);
    let two = fam(&[(1, 1), (1, 2)]);
    let full = IndexedSlidingGraph::build(&act, &two, &fam(&[(1, 2)]), 2, 1_000_000).unwrap();
    assert_eq!(full.component_count() as u128, count_indexed_classes(&two, &fam(&[(1, 2)]), 2, 1_000_000).unwrap());
}

#[test]
fn polynomial_counts() {
    let one = fam(&[(1, 1)]);
    assert_eq!(count_polynomial_nat(&one, &one, 2, 1_000_000).unwrap().count, 1);
    let empty = fam(&[]);
    assert_eq!(count_polynomial_nat(&empty, &fam(&[(2, 2)]), 2, 1_000_000).unwrap().count, 1);
    for src in IndexedFamily::constant_up_to(2, 2) {
        for tgt in IndexedFamily::constant_up_to(2, 2).iter().step_by(3) {
            let got = count_polynomial_nat(&src, tgt, 2, 10_000_000).unwrap();
            assert!(got.probe_relative);
            assert_eq!(got.count, count_dlens_hom(&src.container(), &tgt.container()), "{src:?} {tgt:?}");
        }
    }
    let mixed = fam(&[(1, 0), (2, 2)]);
    assert_eq!(
        count_polynomial_nat(&mixed, &fam(&[(1, 1), (1, 2)]), 2, 1_000_000).unwrap().count,
        count_dlens_hom(&mixed.container(), &fam(&[(1, 1), (1, 2)]).container())
    );
}

#[test]
fn json_round_trip() {
    let act = Act::cartesian();
    let o = act.identity_indexed(&fam(&[(2, 1), (1, 2)]));
    let s = serde_json::to_string(&o).unwrap();
    assert_eq!(serde_json::from_str::<IndexedOptic<FiniteFunction>>(&s).unwrap(), o);
    let m: ResidualMatrix =
        serde_json::from_str(r#"{"rows":{"size":1},"cols":{"size":2},"entries":[[{"size":1},{"size":0}]]}"#).unwrap();
    assert_eq!(m.sizes(), vec![vec![1, 0]]);
    assert!(serde_json::from_str::<ResidualMatrix>(
        r#"{"rows":{"size":2},"cols":{"size":2},"entries":[[{"size":1},{"size":0}]]}"#
    )
    .is_err());
}
