use fiboptic_core::fibre::{fibre_to_indexed, indexed_to_fibre, validate_dmark, DMarkMorphism, DMarkObject};
use fiboptic_core::indexed::{iopt_compose, iopt_to_dlens, IndexedFamily, IndexedOptic, ResidualMatrix};
use fiboptic_core::lens::{lens_compose, lens_to_dlens};
use fiboptic_core::optic::{normalize_cartesian, optic_compose, optic_of_lens, slide, SlideDirection};
use fiboptic_core::{
    ActionInstance, Boundary, Container, DepLens, FinSet, FinSetCat, FiniteCategory, FiniteFunction, FiniteKernel,
    Lens, Morphism, Optic, ProductWitness, Rational,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn function(dom: usize, cod: usize) -> impl Strategy<Value = FiniteFunction> {
    prop::collection::vec(0..cod, dom)
        .prop_map(move |t| FiniteFunction::new(FinSet::new(dom), FinSet::new(cod), t).unwrap())
}

fn kernel(dom: usize, cod: usize) -> impl Strategy<Value = FiniteKernel> {
    prop::collection::vec((prop::collection::vec(0i64..4, cod), 0..cod), dom).prop_map(move |rows| {
        let rows = rows
            .into_iter()
            .map(|(mut w, bump)| {
                w[bump] += 1;
                let total: i64 = w.iter().sum();
                w.into_iter().map(|x| Rational::new(x, total).unwrap()).collect()
            })
            .collect();
        FiniteKernel::from_weights(FinSet::new(dom), FinSet::new(cod), rows).unwrap()
    })
}

fn chain<S: Strategy>(
    make: impl Fn(usize, usize) -> S + Copy,
) -> impl Strategy<Value = (S::Value, S::Value, S::Value)> {
    (0usize..4, 1usize..4, 1usize..4, 1usize..4).prop_flat_map(move |(a, b, c, d)| (make(a, b), make(b, c), make(c, d)))
}

fn boundary<R: Rng>(rng: &mut R, max: usize) -> Boundary {
    Boundary::new(FinSet::new(rng.gen_range(0..=max)), FinSet::new(rng.gen_range(0..=max)))
}

fn random_lens<R: Rng>(rng: &mut R, s: &Boundary, t: &Boundary) -> Option<Lens> {
    let get = FinSetCat.sample(&s.view, &t.view, rng)?;
    let put = FinSetCat.sample(&ProductWitness::new(&s.view, &t.update).carrier, &s.update, rng)?;
    Lens::new(s.clone(), t.clone(), get, put).ok()
}

fn random_dlens<R: Rng>(rng: &mut R, s: &Container, t: &Container) -> Option<DepLens> {
    let forward = FinSetCat.sample(s.positions(), t.positions(), rng)?;
    let backward = (0..s.positions().size())
        .map(|a| FinSetCat.sample(t.direction(forward.apply(a)), s.direction(a), rng))
        .collect::<Option<Vec<_>>>()?;
    DepLens::new(s.clone(), t.clone(), forward, backward).ok()
}

fn container<R: Rng>(rng: &mut R, max: usize) -> Container {
    let n = rng.gen_range(0..=max);
    let dirs: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
    Container::from_sizes(&dirs)
}

fn family<R: Rng>(rng: &mut R, indices: usize, max: usize) -> IndexedFamily {
    let n = rng.gen_range(0..=indices);
    IndexedFamily::from_components((0..n).map(|_| boundary(rng, max)).collect())
}

fn random_indexed<R: Rng>(rng: &mut R, a: &IndexedFamily, b: &IndexedFamily) -> Option<IndexedOptic<FiniteFunction>> {
    let act = ActionInstance::cartesian();
    (0..20).find_map(|_| {
        let sizes: Vec<usize> = (0..a.len() * b.len()).map(|_| rng.gen_range(0..=2)).collect();
        let m = ResidualMatrix::from_sizes(a.len(), b.len(), &sizes).unwrap();
        act.sample_indexed(a, b, &m, rng)
    })
}

fn random_optic<R: Rng>(rng: &mut R, s: &Boundary, t: &Boundary, residual: usize) -> Option<Optic<FiniteFunction>> {
    ActionInstance::cartesian().sample_optic(s, t, &FinSet::new(residual), rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn functions_form_a_category((f, g, h) in chain(function)) {
        prop_assert_eq!(f.then(&g).unwrap().then(&h).unwrap(), f.then(&g.then(&h).unwrap()).unwrap());
        prop_assert_eq!(FiniteFunction::identity(f.dom()).then(&f).unwrap(), f.clone());
        prop_assert_eq!(f.then(&FiniteFunction::identity(g.dom())).unwrap(), f);
    }

    #[test]
    fn kernels_form_a_category((f, g, h) in chain(kernel)) {
        let fg = f.then(&g).unwrap();
        prop_assert_eq!(fg.then(&h).unwrap(), f.then(&g.then(&h).unwrap()).unwrap());
        for row in fg.rows() {
            let total = row.weights().iter().fold(Rational::zero(), |acc, w| acc + *w);
            prop_assert!(total.is_one());
        }
    }

    #[test]
    fn dirac_is_a_functor((f, g, _) in chain(function)) {
        let lhs = FiniteKernel::dirac(&f.then(&g).unwrap());
        prop_assert_eq!(lhs, FiniteKernel::dirac(&f).then(&FiniteKernel::dirac(&g)).unwrap());
    }

    #[test]
    fn product_interchange((f, g, _) in chain(kernel), (h, k, _) in chain(kernel)) {
        let lhs = f.product(&h).then(&g.product(&k)).unwrap();
        prop_assert_eq!(lhs, f.then(&g).unwrap().product(&h.then(&k).unwrap()));
    }

    #[test]
    fn pairing_round_trips(m in 0usize..6, n in 0usize..6) {
        let w = ProductWitness::new(&FinSet::new(m), &FinSet::new(n));
        prop_assert_eq!(w.carrier.size(), m * n);
        for k in w.carrier.elements() {
            let (i, j) = w.unpair(k);
            prop_assert_eq!(w.pair(i, j), k);
        }
    }

    #[test]
    fn lenses_above_the_exhaustive_bound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b: Vec<Boundary> = (0..4).map(|_| boundary(&mut rng, 3)).collect();
        let ls: Option<Vec<Lens>> = (0..3).map(|i| random_lens(&mut rng, &b[i], &b[i + 1])).collect();
        if let Some(ls) = ls {
            let left = lens_compose(&lens_compose(&ls[0], &ls[1]).unwrap(), &ls[2]).unwrap();
            prop_assert_eq!(left, lens_compose(&ls[0], &lens_compose(&ls[1], &ls[2]).unwrap()).unwrap());
            let composite = lens_to_dlens(&lens_compose(&ls[0], &ls[1]).unwrap());
            prop_assert_eq!(composite, lens_to_dlens(&ls[0]).then(&lens_to_dlens(&ls[1])).unwrap());
        }
    }

    #[test]
    fn dependent_lenses_above_the_exhaustive_bound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: Vec<Container> = (0..4).map(|_| container(&mut rng, 3)).collect();
        let ds: Option<Vec<DepLens>> = (0..3).map(|i| random_dlens(&mut rng, &c[i], &c[i + 1])).collect();
        if let Some(ds) = ds {
            let left = ds[0].then(&ds[1]).unwrap().then(&ds[2]).unwrap();
            prop_assert_eq!(left, ds[0].then(&ds[1].then(&ds[2]).unwrap()).unwrap());
            prop_assert_eq!(DepLens::identity(&c[0]).then(&ds[0]).unwrap(), ds[0].clone());
        }
    }

    #[test]
    fn cartesian_optics_normalise_functorially(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let act = ActionInstance::cartesian();
        let b: Vec<Boundary> = (0..3).map(|_| boundary(&mut rng, 3)).collect();
        let (m1, m2) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        if let (Some(o1), Some(o2)) = (random_optic(&mut rng, &b[0], &b[1], m1), random_optic(&mut rng, &b[1], &b[2], m2)) {
            let composite = normalize_cartesian(&optic_compose(&o1, &o2, &act).unwrap(), &act).unwrap();
            let lenses = lens_compose(&normalize_cartesian(&o1, &act).unwrap(), &normalize_cartesian(&o2, &act).unwrap()).unwrap();
            prop_assert_eq!(composite, lenses);
        }
        if let Some(l) = random_lens(&mut rng, &b[0], &b[1]) {
            prop_assert_eq!(normalize_cartesian(&optic_of_lens(&l), &act).unwrap(), l);
        }
    }

    #[test]
    fn sliding_preserves_the_normal_form(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let act = ActionInstance::cartesian();
        let (s, t) = (boundary(&mut rng, 2), boundary(&mut rng, 2));
        let (m, n) = (rng.gen_range(0..=3), rng.gen_range(1..=3));
        if let Some(o) = random_optic(&mut rng, &s, &t, m) {
            let r = FinSetCat.sample(&FinSet::new(m), &FinSet::new(n), &mut rng).unwrap();
            let before = normalize_cartesian(&o, &act).unwrap();
            if let Ok(edge) = slide(&o, &r, SlideDirection::Forward, &act) {
                prop_assert!(act.is_sliding_edge(&edge));
                prop_assert_eq!(normalize_cartesian(&edge.to, &act).unwrap(), before);
            }
        }
    }

    #[test]
    fn indexed_normalisation_is_functorial(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let act = ActionInstance::cartesian();
        let f: Vec<IndexedFamily> = (0..3).map(|_| family(&mut rng, 2, 3)).collect();
        if let (Some(o1), Some(o2)) = (random_indexed(&mut rng, &f[0], &f[1]), random_indexed(&mut rng, &f[1], &f[2])) {
            let lhs = iopt_to_dlens(&iopt_compose(&o1, &o2, &act).unwrap(), &act).unwrap();
            let rhs = iopt_to_dlens(&o1, &act).unwrap().then(&iopt_to_dlens(&o2, &act).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn fibre_optics_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (family(&mut rng, 3, 2), family(&mut rng, 3, 2));
        if let Some(o) = random_indexed(&mut rng, &a, &b) {
            prop_assert_eq!(fibre_to_indexed(&indexed_to_fibre(&o).unwrap()).unwrap(), o);
        }
    }

    #[test]
    fn dmark_support(bundles in (1usize..3, 1usize..3).prop_flat_map(|(i, j)| (
            prop::collection::vec(0..i, 0..4),
            prop::collection::vec(0..j, 1..4),
            function(i, j),
        )).prop_flat_map(|(p, q, f)| {
            let (n, m) = (p.len(), q.len());
            (Just(p), Just(q), Just(f), kernel(n, m))
        })) {
        let (p, q, f, k) = bundles;
        let src = DMarkObject::from_table(f.dom().size(), &p).unwrap();
        let tgt = DMarkObject::from_table(f.cod().size(), &q).unwrap();
        let expect = (0..p.len()).all(|a| k.row(a).support().all(|(b, _)| q[b] == f.apply(p[a])));
        let m = DMarkMorphism { kernel: k, base_map: f };
        prop_assert_eq!(validate_dmark(&m, &src, &tgt).unwrap(), expect);
        if expect {
            let id = DMarkMorphism { kernel: FiniteKernel::identity(tgt.carrier()), base_map: FiniteFunction::identity(tgt.base()) };
            prop_assert!(validate_dmark(&m.then(&id).unwrap(), &src, &tgt).unwrap());
        }
    }

    #[test]
    fn serde_round_trips(seed in any::<u64>(), k in (1usize..4, 1usize..4).prop_flat_map(|(a, b)| kernel(a, b))) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let back: FiniteKernel = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
        prop_assert_eq!(back, k);
        let (s, t) = (boundary(&mut rng, 3), boundary(&mut rng, 3));
        if let Some(l) = random_lens(&mut rng, &s, &t) {
            let back: Lens = serde_json::from_str(&serde_json::to_string(&l).unwrap()).unwrap();
            prop_assert_eq!(back, l);
        }
    }
}
