use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fiboptic_core::fibre::{fibre_optic_compose, indexed_to_fibre, Fam};
use fiboptic_core::indexed::{count_indexed_classes, iopt_compose, IndexedFamily, ResidualMatrix};
use fiboptic_core::lens::enumerate_dlens_hom;
use fiboptic_core::optic::SlidingGraph;
use fiboptic_core::{
    ActionInstance, Boundary, Container, FinSet, FinStochCat, FiniteCategory, FiniteKernel, DEFAULT_CEILING,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn two() -> Boundary {
    Boundary::new(FinSet::new(2), FinSet::new(2))
}

fn sliding(c: &mut Criterion) {
    let act = ActionInstance::cartesian();
    c.bench_function("sliding graph (2,2)->(2,2) components", |b| {
        b.iter(|| SlidingGraph::build(&act, &two(), &two(), 2, DEFAULT_CEILING).unwrap().component_count())
    });
}

fn dlens(c: &mut Criterion) {
    let (s, t) = (Container::from_sizes(&[2, 1, 2]), Container::from_sizes(&[2, 2]));
    c.bench_function("enumerate dependent lenses [2,1,2]->[2,2]", |b| {
        b.iter(|| enumerate_dlens_hom(black_box(&s), &t, DEFAULT_CEILING).unwrap().len())
    });
}

fn kernels(c: &mut Criterion) {
    let k = FinStochCat::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (x, y) = (FinSet::new(12), FinSet::new(12));
    let f: FiniteKernel = k.sample(&x, &y, &mut rng).unwrap();
    let g: FiniteKernel = k.sample(&y, &x, &mut rng).unwrap();
    c.bench_function("compose 12x12 kernels", |b| b.iter(|| black_box(&f).then(&g).unwrap()));
    c.bench_function("product of 12x12 kernels", |b| b.iter(|| black_box(&f).product(&g)));
}

fn indexed(c: &mut Criterion) {
    let act = ActionInstance::cartesian();
    let fam = IndexedFamily::from_components(vec![two(), two()]);
    let m = ResidualMatrix::from_sizes(2, 2, &[1, 2, 2, 1]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let o1 = act.sample_indexed(&fam, &fam, &m, &mut rng).unwrap();
    let o2 = act.sample_indexed(&fam, &fam, &m, &mut rng).unwrap();
    c.bench_function("indexed optic compose", |b| b.iter(|| iopt_compose(black_box(&o1), &o2, &act).unwrap()));
    let (f1, f2) = (indexed_to_fibre(&o1).unwrap(), indexed_to_fibre(&o2).unwrap());
    c.bench_function("fam fibre optic compose", |b| b.iter(|| fibre_optic_compose(black_box(&f1), &f2, &Fam).unwrap()));
    c.bench_function("indexed sliding classes [(2,2),(2,2)]", |b| {
        b.iter(|| count_indexed_classes(black_box(&fam), &fam, 2, DEFAULT_CEILING).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = sliding, dlens, kernels, indexed
}
criterion_main!(benches);
