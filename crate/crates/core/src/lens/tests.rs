use super::*;
use crate::fincat::check_category_laws;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_lens(rng: &mut ChaCha8Rng, s: &Boundary, t: &Boundary) -> Lens {
    let (y, xp) = (t.view.size(), s.update.size());
    let get: Vec<usize> = (0..s.view.size()).map(|_| rng.gen_range(0..y)).collect();
    let put: Vec<usize> = (0..s.view.size() * t.update.size()).map(|_| rng.gen_range(0..xp)).collect();
    Lens::from_fns(s.clone(), t.clone(), |x| get[x], |x, y2| put[x * t.update.size() + y2]).unwrap()
}

#[test]
fn composing_with_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let b = Boundary::sized(2, 2);
    let l = random_lens(&mut rng, &b, &Boundary::sized(2, 1));
    assert_eq!(lens_compose(&l, &Lens::identity(l.target())).unwrap(), l);
    assert_eq!(lens_compose(&Lens::identity(&b), &Lens::identity(&b)).unwrap(), Lens::identity(&b));
}

#[test]
fn composite_matches_pointwise_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (a, b, c) = (Boundary::sized(2, 2), Boundary::sized(2, 2), Boundary::sized(2, 2));
    for _ in 0..50 {
        let l1 = random_lens(&mut rng, &a, &b);
        let l2 = random_lens(&mut rng, &b, &c);
        let l = lens_compose(&l1, &l2).unwrap();
        for x in 0..2 {
            let fx = l1.get().table()[x];
            assert_eq!(l.get().table()[x], l2.get().table()[fx]);
            for z in 0..2 {
                let inner = l2.put().table()[fx * 2 + z];
                assert_eq!(l.put().table()[x * 2 + z], l1.put().table()[x * 2 + inner]);
            }
        }
    }
}

#[test]
fn mismatched_lenses_do_not_compose() {
    let l1 = Lens::identity(&Boundary::sized(2, 2));
    let l2 = Lens::identity(&Boundary::sized(2, 1));
    assert!(matches!(lens_compose(&l1, &l2), Err(Error::Mismatch(_))));
}

#[test]
fn lens_and_dependent_lens_laws() {
    let r = check_category_laws(&LensCategory, "lens", 2, 1_000_000).unwrap();
    assert!(r.passed());
    let r = check_category_laws(&DepLensCategory, "dlens", 1, 1_000_000).unwrap();
    assert!(r.passed());
}

#[test]
fn counting_examples() {
    assert_eq!(count_dlens_hom(&Container::from_sizes(&[]), &Container::from_sizes(&[3])), 1);
    let src = Container::from_sizes(&[1, 2]);
    let tgt = Container::from_sizes(&[2]);
    assert_eq!(count_dlens_hom(&src, &tgt), 4);
    assert_eq!(enumerate_dlens_hom(&src, &tgt, 100).unwrap().len(), 4);
    let src = Container::from_sizes(&[2, 2]);
    assert_eq!(count_dlens_hom(&src, &tgt), 16);
    assert_eq!(Lens::count(&Boundary::sized(2, 2), &Boundary::sized(1, 2)), 16);
    let src = Container::from_sizes(&[0, 1]);
    let tgt = Container::from_sizes(&[1, 2]);
    assert_eq!(count_dlens_hom(&src, &tgt), 0);
    assert!(enumerate_dlens_hom(&src, &tgt, 100).unwrap().is_empty());
    let one = Container::from_sizes(&[1]);
    assert_eq!(enumerate_dlens_hom(&one, &one, 10).unwrap().len(), 1);
}

#[test]
fn enumeration_matches_count_and_is_duplicate_free() {
    let cs = Container::up_to(2);
    for s in &cs {
        for t in &cs {
            let all = enumerate_dlens_hom(s, t, 1_000_000).unwrap();
            assert_eq!(all.len() as u128, count_dlens_hom(s, t));
            let distinct: std::collections::HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
        }
    }
}

#[test]
fn enumeration_ceiling() {
    let c = Container::from_sizes(&[2, 2]);
    assert!(matches!(enumerate_dlens_hom(&c, &c, 10), Err(Error::Ceiling { .. })));
}

#[test]
fn embedding_is_functorial() {
    let bs = Boundary::up_to(2);
    for b in &bs {
        assert_eq!(lens_to_dlens(&Lens::identity(b)), DepLens::identity(&lens_to_dlens(&Lens::identity(b)).source));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for a in &bs {
        for b in &bs {
            for c in &bs {
                for _ in 0..4 {
                    if Lens::count(a, b) == 0 || Lens::count(b, c) == 0 {
                        continue;
                    }
                    let l1 = random_lens(&mut rng, a, b);
                    let l2 = random_lens(&mut rng, b, c);
                    let lhs = lens_to_dlens(&lens_compose(&l1, &l2).unwrap());
                    let rhs = dlens_compose(&lens_to_dlens(&l1), &lens_to_dlens(&l2)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn constant_forward_from_non_injective_get() {
    let l = Lens::from_fns(Boundary::sized(2, 2), Boundary::sized(1, 2), |_| 0, |x, y| x ^ y).unwrap();
    let d = lens_to_dlens(&l);
    assert_eq!(d.forward().table(), &[0, 0]);
    assert_eq!(d.backward()[1].table(), &[1, 0]);
}

#[test]
fn json_round_trip() {
    let l = Lens::from_fns(Boundary::sized(2, 2), Boundary::sized(1, 2), |_| 0, |x, y| x ^ y).unwrap();
    let s = serde_json::to_string(&l).unwrap();
    assert_eq!(serde_json::from_str::<Lens>(&s).unwrap(), l);
    let d = lens_to_dlens(&l);
    let s = serde_json::to_string(&d).unwrap();
    assert_eq!(serde_json::from_str::<DepLens>(&s).unwrap(), d);
    let bad = s.replace(
        "\"forward\":{\"dom\":{\"size\":2},\"cod\":{\"size\":1},\"table\":[0,0]}",
        "\"forward\":{\"dom\":{\"size\":2},\"cod\":{\"size\":1},\"table\":[0]}",
    );
    assert!(serde_json::from_str::<DepLens>(&bad).is_err());
}
