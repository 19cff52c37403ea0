use std::collections::HashSet;

use super::*;
use crate::fibre::{Fam, FamObject};
use crate::fincat::FinSetCat;
use crate::indexed::{matrix_multiply, ResidualMatrix};
use crate::lens::{count_dlens_hom, lens_compose, Boundary, Container, Lens};
use crate::optic::{Optic, SlidingGraph};
use crate::DEFAULT_CEILING;

fn f(dom: usize, cod: usize, table: &[usize]) -> FiniteFunction {
    FiniteFunction::new(FinSet::new(dom), FinSet::new(cod), table.to_vec()).unwrap()
}

fn sets(range: std::ops::RangeInclusive<usize>) -> Vec<FinSet> {
    range.map(FinSet::new).collect()
}

fn all_copara(x: &FinSet, m: &FinSet, y: &FinSet) -> Vec<CoparaCell<FiniteFunction>> {
    let my = ProductWitness::new(m, y).carrier;
    FiniteFunction::enumerate(x, &my, DEFAULT_CEILING)
        .unwrap()
        .into_iter()
        .map(|g| CoparaCell::new(x.clone(), y.clone(), m.clone(), g).unwrap())
        .collect()
}

/// `((a, b), c) ↦ (a, (b, c))`.
fn associator(a: &FinSet, b: &FinSet, c: &FinSet) -> FiniteFunction {
    let ab = ProductWitness::new(a, b);
    let lhs = ProductWitness::new(&ab.carrier, c);
    let bc = ProductWitness::new(b, c);
    let rhs = ProductWitness::new(a, &bc.carrier);
    FiniteFunction::from_fn(lhs.carrier.clone(), rhs.carrier.clone(), |k| {
        let (p, z) = lhs.unpair(k);
        let (x, y) = ab.unpair(p);
        rhs.pair(x, bc.pair(y, z))
    })
    .unwrap()
}

#[test]
fn copy_examples() {
    let c = copy_functor(&FiniteFunction::identity(&FinSet::new(2)));
    assert_eq!(c.map.table(), &[0, 3]);
    assert_eq!(c.param, FinSet::new(2));
    let c = copy_functor(&f(2, 1, &[0, 0]));
    assert_eq!(c.map.table(), &[0, 1]);
    assert_eq!(c.param, dom_functor(&f(2, 1, &[0, 0])));
    assert_eq!(dom_functor(&FiniteFunction::identity(&FinSet::new(3))), FinSet::new(3));
}

#[test]
fn copara_unit_parameter() {
    let act = ActionInstance::cartesian();
    for c1 in all_copara(&FinSet::new(2), &FinSet::new(2), &FinSet::new(2)) {
        let y = FinSet::new(2);
        let unit = CoparaCell::new(y.clone(), y.clone(), act.unit(), act.left_unitor(&y).inverse().unwrap()).unwrap();
        let c = copara_compose(&c1, &unit, &act).unwrap();
        assert_eq!(c.param.size(), c1.param.size());
        assert_eq!(c.map.table(), c1.map.table());
    }
}

#[test]
fn copy_is_oplax() {
    let act = ActionInstance::cartesian();
    for a in sets(0..=2) {
        for b in sets(0..=2) {
            for c in sets(0..=2) {
                for g1 in FiniteFunction::enumerate(&a, &b, DEFAULT_CEILING).unwrap() {
                    for g2 in FiniteFunction::enumerate(&b, &c, DEFAULT_CEILING).unwrap() {
                        let both = g1.then(&g2).unwrap();
                        let cell = Reparam2Cell::Copara {
                            from: copy_functor(&both),
                            to: copara_compose(&copy_functor(&g1), &copy_functor(&g2), &act).unwrap(),
                            mediator: dom_comparison(&g1, &g2).unwrap(),
                        };
                        assert!(cell.is_valid(&act));
                        // a ↦ (a, g1 a) is not the identity, so the wrong mediator fails
                        if a.size() == 2 && b.size() == 2 {
                            let wrong = Reparam2Cell::Copara {
                                from: copy_functor(&both),
                                to: copara_compose(&copy_functor(&g1), &copy_functor(&g2), &act).unwrap(),
                                mediator: FiniteFunction::from_fn(
                                    a.clone(),
                                    ProductWitness::new(&a, &b).carrier,
                                    |x| x * 2 + (1 - g1.apply(x)),
                                )
                                .unwrap(),
                            };
                            assert!(!wrong.is_valid(&act));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn dom_comparison_coherence() {
    for a in sets(0..=2) {
        for b in sets(0..=2) {
            for c in sets(0..=2) {
                for g1 in FiniteFunction::enumerate(&a, &b, DEFAULT_CEILING).unwrap() {
                    for g2 in FiniteFunction::enumerate(&b, &c, DEFAULT_CEILING).unwrap() {
                        let g12 = g1.then(&g2).unwrap();
                        // a ↦ (a, (g1 a, g2 g1 a)) against a ↦ ((a, g1 a), g2 g1 a)
                        let right = dom_comparison(&g1, &g2)
                            .unwrap()
                            .then(&FinSetCat.product(
                                &FiniteFunction::identity(&a),
                                &dom_comparison(&g2, &FiniteFunction::identity(&c)).unwrap(),
                            ))
                            .unwrap();
                        let left = dom_comparison(&g12, &FiniteFunction::identity(&c))
                            .unwrap()
                            .then(&FinSetCat.product(&dom_comparison(&g1, &g2).unwrap(), &FiniteFunction::identity(&c)))
                            .unwrap();
                        assert_eq!(left.then(&associator(&a, &b, &c)).unwrap(), right);
                    }
                }
            }
        }
    }
    assert!(dom_comparison(&f(1, 2, &[0]), &f(1, 1, &[0])).is_err());
}

#[test]
fn copara_associative_up_to_reparametrisation() {
    let act = ActionInstance::cartesian();
    let objs = sets(1..=2);
    for x in &objs {
        for y in &objs {
            for z in &objs {
                for m in &objs {
                    for n in &objs {
                        let c1s = all_copara(x, m, y);
                        let c2s = all_copara(y, n, z);
                        let p = FinSet::new(2);
                        let c3s = all_copara(z, &p, &FinSet::new(1));
                        for c1 in &c1s {
                            for c2 in &c2s {
                                let c12 = copara_compose(c1, c2, &act).unwrap();
                                for c3 in &c3s {
                                    let left = copara_compose(&c12, c3, &act).unwrap();
                                    let right =
                                        copara_compose(c1, &copara_compose(c2, c3, &act).unwrap(), &act).unwrap();
                                    let cell =
                                        Reparam2Cell::Copara { from: left, to: right, mediator: associator(m, n, &p) };
                                    assert!(cell.is_valid(&act));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn para_compose_is_lens_update_composition() {
    let act = ActionInstance::cartesian();
    let bs: Vec<Boundary> =
        Boundary::up_to(2).into_iter().filter(|b| b.view.size() > 0 && b.update.size() > 0).collect();
    let mut checked = 0;
    for s in &bs {
        for m in &bs {
            for t in &bs {
                let l1s = Lens::enumerate(s, m, DEFAULT_CEILING).unwrap();
                let l2s = Lens::enumerate(m, t, DEFAULT_CEILING).unwrap();
                for l1 in &l1s {
                    for l2 in &l2s {
                        let u1 = ParaCell::new(m.update.clone(), s.update.clone(), s.view.clone(), l1.put().clone())
                            .unwrap();
                        let u2 = ParaCell::new(t.update.clone(), m.update.clone(), m.view.clone(), l2.put().clone())
                            .unwrap();
                        let both = para_compose(&u2, &u1, &act).unwrap();
                        let to = ParaCell::new(
                            t.update.clone(),
                            s.update.clone(),
                            s.view.clone(),
                            lens_compose(l1, l2).unwrap().put().clone(),
                        )
                        .unwrap();
                        let cell = Reparam2Cell::Para { from: both, to, mediator: copy_functor(l1.get()).map };
                        assert!(cell.is_valid(&act));
                        checked += 1;
                    }
                }
            }
        }
    }
    assert_eq!(checked, 8504);
}

#[test]
fn para_unit_and_associativity() {
    let act = ActionInstance::cartesian();
    let x = FinSet::new(2);
    let one = act.unit();
    let p1s = FiniteFunction::enumerate(&ProductWitness::new(&x, &x).carrier, &x, DEFAULT_CEILING).unwrap();
    let unit = ParaCell::new(x.clone(), x.clone(), one.clone(), act.left_unitor(&x)).unwrap();
    for g in &p1s {
        let p = ParaCell::new(x.clone(), x.clone(), x.clone(), g.clone()).unwrap();
        assert_eq!(para_compose(&p, &unit, &act).unwrap().map.table(), g.table());
    }
    for g1 in &p1s {
        let p1 = ParaCell::new(x.clone(), x.clone(), x.clone(), g1.clone()).unwrap();
        for g2 in p1s.iter().step_by(3) {
            let p2 = ParaCell::new(x.clone(), x.clone(), x.clone(), g2.clone()).unwrap();
            let p12 = para_compose(&p1, &p2, &act).unwrap();
            for g3 in p1s.iter().step_by(5) {
                let p3 = ParaCell::new(x.clone(), x.clone(), x.clone(), g3.clone()).unwrap();
                let left = para_compose(&p12, &p3, &act).unwrap();
                let right = para_compose(&p1, &para_compose(&p2, &p3, &act).unwrap(), &act).unwrap();
                // left has parameter P⊗(N⊗M), right (P⊗N)⊗M
                let cell = Reparam2Cell::Para { from: left, to: right, mediator: associator(&x, &x, &x) };
                assert!(cell.is_valid(&act));
            }
        }
    }
}

#[test]
fn pullback_along_identity_is_isomorphic() {
    let act = ActionInstance::cartesian();
    let left = copara_hom(&act, &FinSet::new(2), &FinSet::new(1), 2, DEFAULT_CEILING).unwrap();
    let base = base_homcat(2, DEFAULT_CEILING).unwrap();
    let p = pullback_homcat(&left, &base).unwrap();
    assert_eq!(p.vertex_count(), left.vertex_count());
    assert_eq!(p.edge_count(), left.edge_count());
    assert_eq!(pi0_quotient(&p), pi0_quotient(&left));
}

fn swap(m: &FinSet, yp: &FinSet) -> FiniteFunction {
    let a = ProductWitness::new(yp, m);
    let b = ProductWitness::new(m, yp);
    FiniteFunction::from_fn(a.carrier.clone(), b.carrier.clone(), |k| {
        let (y, r) = a.unpair(k);
        b.pair(r, y)
    })
    .unwrap()
}

#[test]
fn copara_para_pullback_is_the_sliding_graph() {
    let act = ActionInstance::cartesian();
    let b = Boundary::sized(2, 2);
    let views = copara_hom(&act, &b.view, &b.view, 2, DEFAULT_CEILING).unwrap();
    let updates = para_hom(&act, &b.update, &b.update, 2, DEFAULT_CEILING).unwrap().coop();
    let top = pullback_homcat(&views, &updates).unwrap();
    let graph = SlidingGraph::build(&act, &b, &b, 2, DEFAULT_CEILING).unwrap();
    assert_eq!(top.vertex_count(), 272);
    assert_eq!(graph.vertex_count(), 272);
    assert_eq!(top.edge_count(), 1232);
    assert_eq!(top.edge_count(), graph.edge_count());
    let labels = pi0_quotient(&top);
    assert_eq!(component_count(&labels), 64);

    let graph_labels = graph.labels();
    let mut seen = HashSet::new();
    let mut pairs = HashSet::new();
    for (v, (c, p)) in top.vertices.iter().enumerate() {
        let backward = swap(&p.param, &b.update).then(&p.map).unwrap();
        let o = Optic::new(b.clone(), b.clone(), c.param.clone(), c.map.clone(), backward).unwrap();
        let i = graph.index_of(&o).expect("every pullback vertex is an optic representative");
        assert!(seen.insert(i));
        pairs.insert((labels[v], graph_labels[i]));
    }
    // the two partitions coincide
    assert_eq!(pairs.len(), 64);
}

#[test]
fn pullback_projections_are_functors() {
    let act = ActionInstance::cartesian();
    let (x, y) = (FinSet::new(2), FinSet::new(1));
    let views = copara_hom(&act, &x, &y, 2, DEFAULT_CEILING).unwrap();
    let updates = para_hom(&act, &FinSet::new(2), &FinSet::new(2), 2, DEFAULT_CEILING).unwrap().coop();
    let top = pullback_homcat(&views, &updates).unwrap();
    let left: HashSet<_> = views.edges.iter().map(|e| (e.from, e.to, e.mediator.clone())).collect();
    let right: HashSet<_> = updates
        .edges
        .iter()
        .map(|e| {
            let (a, b) = updates.oriented(e);
            (a, b, e.mediator.clone())
        })
        .collect();
    for e in &top.edges {
        let (a, b) = (&top.vertices[e.from], &top.vertices[e.to]);
        let l = (views.index_of(&a.0).unwrap(), views.index_of(&b.0).unwrap(), e.mediator.clone());
        let r = (updates.index_of(&a.1).unwrap(), updates.index_of(&b.1).unwrap(), e.mediator.clone());
        assert!(left.contains(&l) && right.contains(&r));
        assert_eq!(&top.params[e.from], e.mediator.dom());
        assert_eq!(&top.params[e.to], e.mediator.cod());
    }
    // identities: each vertex carries the pair of identity 2-cells
    for (v, p) in top.params.iter().enumerate() {
        assert!(top.edges.iter().any(|e| e.from == v && e.to == v && e.mediator == FiniteFunction::identity(p)));
    }
    // composites of consecutive edges stay in the pullback's edge set
    let edges: HashSet<_> = top.edges.iter().map(|e| (e.from, e.to, e.mediator.clone())).collect();
    for e1 in top.edges.iter().step_by(7) {
        for e2 in top.edges.iter().filter(|e| e.from == e1.to) {
            assert!(edges.contains(&(e1.from, e2.to, e1.mediator.then(&e2.mediator).unwrap())));
        }
    }
}

#[test]
fn pi0_basics() {
    let mut h: HomCategory<usize, FinSet, FiniteFunction> = HomCategory {
        vertices: vec![0, 1, 2],
        params: vec![FinSet::new(1); 3],
        edges: vec![],
        orientation: Orientation::default(),
    };
    assert_eq!(component_count(&pi0_quotient(&h)), 3);
    let id = FiniteFunction::identity(&FinSet::new(1));
    h.edges.push(HomEdge { from: 2, to: 0, mediator: id.clone() });
    assert_eq!(pi0_quotient(&h), vec![0, 1, 0]);
    h.edges.push(HomEdge { from: 0, to: 2, mediator: id });
    assert_eq!(component_count(&pi0_quotient(&h)), 2);
}

#[test]
fn mat_compose_matches_matrix_multiply() {
    let act = ActionInstance::cartesian();
    let cell = |m: &ResidualMatrix| {
        let sizes: Vec<usize> = m.sizes().concat();
        MatCell::new(&Fam, m.rows().clone(), m.cols().clone(), FamObject::from_sizes(&sizes)).unwrap()
    };
    let mut checked = 0;
    for i in 1..=2 {
        for j in 1..=2 {
            for k in 1..=2 {
                for m in ResidualMatrix::all(i, j, 2) {
                    for n in ResidualMatrix::all(j, k, 2) {
                        let got = mat_compose(&cell(&m), &cell(&n), &Fam).unwrap();
                        let want = matrix_multiply(&m, &n, &act).unwrap();
                        assert_eq!(got.entry.sizes(), want.sizes().concat());
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 1000);
    // a terminal index gives the plain product
    let one = FinSet::new(1);
    let a = MatCell::new(&Fam, one.clone(), one.clone(), FamObject::from_sizes(&[2])).unwrap();
    let b = MatCell::new(&Fam, one.clone(), one.clone(), FamObject::from_sizes(&[3])).unwrap();
    assert_eq!(mat_compose(&a, &b, &Fam).unwrap().entry.sizes(), vec![6]);
    // units
    for n in ResidualMatrix::all(2, 2, 2) {
        let unit = unit_mat_cell(&Fam, &FinSet::new(2)).unwrap();
        assert_eq!(mat_compose(&unit, &cell(&n), &Fam).unwrap().entry.sizes(), n.sizes().concat());
        assert_eq!(mat_compose(&cell(&n), &unit, &Fam).unwrap().entry.sizes(), n.sizes().concat());
    }
    assert!(mat_compose(&a, &cell(&ResidualMatrix::all(2, 2, 1)[0]), &Fam).is_err());
}

#[test]
fn cosmic_cube_passes() {
    let r = check_cosmic_cube(1, DEFAULT_CEILING).unwrap();
    assert!(r.report.passed());
    let r = check_cosmic_cube(2, DEFAULT_CEILING).unwrap();
    assert!(r.report.passed(), "{:?}", r.report.violations);
    assert_eq!(r.faces.len(), 81 * 3);
    let top = r.faces.iter().find(|f| f.face == "top" && f.object_sizes == [2, 2, 2, 2]).unwrap();
    assert_eq!((top.left_count, top.right_count), (64, 64));
}

#[test]
fn cosmic_cube_rejects_broken_copy() {
    let broken = |g: &FiniteFunction| {
        let mut c = copy_functor(g);
        let w = ProductWitness::new(g.dom(), g.cod());
        c.map = FiniteFunction::from_fn(g.dom().clone(), w.carrier.clone(), |a| w.pair(0, g.apply(a))).unwrap();
        c
    };
    let r = check_cosmic_cube_with(2, DEFAULT_CEILING, &broken).unwrap();
    assert!(!r.report.passed());
    assert!(r.faces.iter().any(|f| f.face == "vertical" && !f.pass));
    assert!(r.faces.iter().filter(|f| f.face != "vertical").all(|f| f.pass));
}

#[test]
fn dependent_cube_terminal_slice() {
    for xp in 0..=2 {
        for yp in 0..=2 {
            let r = check_dependent_cube_at(
                &Container::from_sizes(&[xp]),
                &Container::from_sizes(&[yp]),
                2,
                DEFAULT_CEILING,
            )
            .unwrap();
            let lenses = Lens::count(&Boundary::sized(1, xp), &Boundary::sized(1, yp));
            assert_eq!(r.components, lenses);
            assert!(r.agree && r.consistent);
        }
    }
}

#[test]
fn dependent_cube_counts() {
    let r =
        check_dependent_cube_at(&Container::from_sizes(&[2, 1]), &Container::from_sizes(&[0, 2]), 2, DEFAULT_CEILING)
            .unwrap();
    assert_eq!(r.dlens_count, count_dlens_hom(&Container::from_sizes(&[2, 1]), &Container::from_sizes(&[0, 2])));
    assert_eq!(r.dlens_count, (1 + 4) * (1 + 1));
    assert_eq!(r.components, r.dlens_count);
    let empty =
        check_dependent_cube_at(&Container::from_sizes(&[0]), &Container::from_sizes(&[]), 2, DEFAULT_CEILING).unwrap();
    assert_eq!((empty.components, empty.dlens_count), (0, 0));
    let r = check_dependent_cube(2, DEFAULT_CEILING).unwrap();
    assert!(r.report.passed());
    assert!(r.all_agree);
    assert_eq!(r.records.len(), 13 * 13);
}
