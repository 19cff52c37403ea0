//! Optics as pullbacks of parametrised hom-categories.
//!
//! Bicategories appear only through their hom-categories between fixed
//! endpoints, with a bounded universe of parameters. A [`HomCategory`] lists
//! 1-cells as vertices and reparametrisation 2-cells as edges; each edge
//! projects to a base 2-cell `(param_from, param_to, mediator)`, and
//! [`pullback_homcat`] pairs vertices with equal parameters and edges with
//! equal base 2-cells. Taking connected components ([`pi0_quotient`]) turns
//! such a pullback into a hom-set of optics.

mod cube;

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

pub use cube::{
    check_cosmic_cube, check_cosmic_cube_at, check_cosmic_cube_with, check_dependent_cube, check_dependent_cube_at,
    CubeReport, DependentCubeRecord, DependentCubeReport, FaceRecord,
};

use crate::error::{guard, Error, Result};
use crate::fibre::{diagonal, residual_compose, Bifibration};
use crate::fincat::{FinSet, FiniteCategory, FiniteFunction, Morphism, ProductWitness};
use crate::optic::ActionInstance;
use crate::unionfind::Components;

/// `(M, f: X → M × Y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoparaCell<F> {
    pub source: FinSet,
    pub target: FinSet,
    pub param: FinSet,
    pub map: F,
}

/// `(M, f: M × X → Y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParaCell<F> {
    pub source: FinSet,
    pub target: FinSet,
    pub param: FinSet,
    pub map: F,
}

impl<F: Morphism> CoparaCell<F> {
    pub fn new(source: FinSet, target: FinSet, param: FinSet, map: F) -> Result<Self> {
        if map.dom() != &source || map.cod().size() != param.size() * target.size() {
            return Err(Error::invalid("copara cell", "map is not X → M × Y"));
        }
        Ok(CoparaCell { source, target, param, map })
    }
}

impl<F: Morphism> ParaCell<F> {
    pub fn new(source: FinSet, target: FinSet, param: FinSet, map: F) -> Result<Self> {
        if map.cod() != &target || map.dom().size() != param.size() * source.size() {
            return Err(Error::invalid("para cell", "map is not M × X → Y"));
        }
        Ok(ParaCell { source, target, param, map })
    }
}

/// `c1` then `c2`, with parameter `M ⊗ N`:
/// `X → M×Y → M×(N×Z) → (M⊗N)×Z`.
pub fn copara_compose<K: FiniteCategory>(
    c1: &CoparaCell<K::Mor>,
    c2: &CoparaCell<K::Mor>,
    act: &ActionInstance<K>,
) -> Result<CoparaCell<K::Mor>> {
    if c1.target != c2.source {
        return Err(Error::mismatch("copara cells do not compose"));
    }
    let k = &act.category;
    let whisker = k.product(&k.identity(&c1.param), &c2.map);
    let assoc = k.from_function(&act.multiplicator(&c1.param, &c2.param, &c2.target));
    let map = k.compose(&k.compose(&c1.map, &whisker)?, &assoc)?;
    CoparaCell::new(c1.source.clone(), c2.target.clone(), act.tensor(&c1.param, &c2.param), map)
}

/// `p1` then `p2`, with parameter `N ⊗ M` (the later parameter on the left):
/// `(N⊗M)×X → N×(M×X) → N×Y → Z`.
pub fn para_compose<K: FiniteCategory>(
    p1: &ParaCell<K::Mor>,
    p2: &ParaCell<K::Mor>,
    act: &ActionInstance<K>,
) -> Result<ParaCell<K::Mor>> {
    if p1.target != p2.source {
        return Err(Error::mismatch("para cells do not compose"));
    }
    let k = &act.category;
    let (m, n, x) = (&p1.param, &p2.param, &p1.source);
    let nm = ProductWitness::new(n, m);
    let dom = ProductWitness::new(&nm.carrier, x);
    let mx = ProductWitness::new(m, x);
    let cod = ProductWitness::new(n, &mx.carrier);
    let assoc = FiniteFunction::from_fn(dom.carrier.clone(), cod.carrier.clone(), |t| {
        let (q, c) = dom.unpair(t);
        let (a, b) = nm.unpair(q);
        cod.pair(a, mx.pair(b, c))
    })?;
    let map = k.compose(&k.compose(&k.from_function(&assoc), &k.product(&k.identity(n), &p1.map))?, &p2.map)?;
    ParaCell::new(x.clone(), p2.target.clone(), nm.carrier, map)
}

/// Which cell type a 2-cell lives in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Reparam2Cell<F> {
    /// `r: M → N` with `to.map = from.map ; (r × Y)`.
    Copara { from: CoparaCell<F>, to: CoparaCell<F>, mediator: F },
    /// `r: M → N` with `to.map = (r × X) ; from.map`; `from` has parameter `N`.
    Para { from: ParaCell<F>, to: ParaCell<F>, mediator: F },
}

impl<F: Morphism + Clone + PartialEq> Reparam2Cell<F> {
    /// Checks the triangle by composing the concrete morphisms.
    pub fn is_valid<K: FiniteCategory<Mor = F>>(&self, act: &ActionInstance<K>) -> bool {
        let k = &act.category;
        match self {
            Reparam2Cell::Copara { from, to, mediator } => {
                from.source == to.source
                    && from.target == to.target
                    && mediator.dom() == &from.param
                    && mediator.cod() == &to.param
                    && k.compose(&from.map, &k.product(mediator, &k.identity(&from.target))).as_ref() == Ok(&to.map)
            }
            Reparam2Cell::Para { from, to, mediator } => {
                from.source == to.source
                    && from.target == to.target
                    && mediator.dom() == &to.param
                    && mediator.cod() == &from.param
                    && k.compose(&k.product(mediator, &k.identity(&from.source)), &from.map).as_ref() == Ok(&to.map)
            }
        }
    }
}

/// Reversal flags: `op` swaps the endpoints of 1-cells, `co` reverses 2-cells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    pub op: bool,
    pub co: bool,
}

/// A 2-cell between vertices `from` and `to`, stored in its native direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomEdge<F> {
    pub from: usize,
    pub to: usize,
    pub mediator: F,
}

/// A hom-category with its projection to parameters: vertex `v` lies over
/// `params[v]` and every edge over its mediator.
#[derive(Clone, Debug)]
pub struct HomCategory<V, P, F> {
    pub vertices: Vec<V>,
    pub params: Vec<P>,
    pub edges: Vec<HomEdge<F>>,
    pub orientation: Orientation,
}

impl<V, P, F> HomCategory<V, P, F>
where
    V: Clone + Eq + Hash,
    P: Clone + Eq,
    F: Clone + Eq + Hash,
{
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The same data with 1-cells and 2-cells reversed.
    pub fn coop(mut self) -> Self {
        self.orientation.op = !self.orientation.op;
        self.orientation.co = !self.orientation.co;
        self
    }

    /// Endpoints of an edge after applying the orientation.
    pub fn oriented(&self, e: &HomEdge<F>) -> (usize, usize) {
        if self.orientation.co {
            (e.to, e.from)
        } else {
            (e.from, e.to)
        }
    }

    /// The base 2-cell an edge projects to.
    pub fn base_cell<'a>(&'a self, e: &'a HomEdge<F>) -> (&'a P, &'a P, &'a F) {
        let (a, b) = self.oriented(e);
        (&self.params[a], &self.params[b], &e.mediator)
    }

    pub fn index_of(&self, v: &V) -> Option<usize> {
        self.vertices.iter().position(|w| w == v)
    }
}

/// Vertices are pairs over equal parameters; edges are pairs of edges over
/// equal base 2-cells, oriented as in the factors.
pub fn pullback_homcat<V1, V2, P, F>(
    left: &HomCategory<V1, P, F>,
    right: &HomCategory<V2, P, F>,
) -> Result<HomCategory<(V1, V2), P, F>>
where
    V1: Clone + Eq + Hash,
    V2: Clone + Eq + Hash,
    P: Clone + Eq + Hash,
    F: Clone + Eq + Hash,
{
    let mut by_param: HashMap<&P, Vec<usize>> = HashMap::new();
    for (b, p) in right.params.iter().enumerate() {
        by_param.entry(p).or_default().push(b);
    }
    let mut vertices = Vec::new();
    let mut params = Vec::new();
    let mut index = HashMap::new();
    for (a, p) in left.params.iter().enumerate() {
        for &b in by_param.get(p).into_iter().flatten() {
            index.insert((a, b), vertices.len());
            vertices.push((left.vertices[a].clone(), right.vertices[b].clone()));
            params.push(p.clone());
        }
    }
    let mut by_cell: HashMap<(&P, &P, &F), Vec<usize>> = HashMap::new();
    for (i, e) in right.edges.iter().enumerate() {
        by_cell.entry(right.base_cell(e)).or_default().push(i);
    }
    let mut edges = Vec::new();
    for e1 in &left.edges {
        let (a1, a2) = left.oriented(e1);
        for &i in by_cell.get(&left.base_cell(e1)).into_iter().flatten() {
            let (b1, b2) = right.oriented(&right.edges[i]);
            edges.push(HomEdge { from: index[&(a1, b1)], to: index[&(a2, b2)], mediator: e1.mediator.clone() });
        }
    }
    Ok(HomCategory { vertices, params, edges, orientation: Orientation::default() })
}

/// Component id per vertex, numbered by first appearance; edges count in
/// both directions.
pub fn pi0_quotient<V, P, F>(h: &HomCategory<V, P, F>) -> Vec<usize> {
    let mut c = Components::new(h.vertices.len());
    for e in &h.edges {
        c.union(e.from, e.to);
    }
    c.labels()
}

/// Number of distinct labels.
pub fn component_count(labels: &[usize]) -> usize {
    labels.iter().max().map_or(0, |m| m + 1)
}

/// Vertex index, adding the vertex when it is new.
fn intern<V: Clone + Eq + Hash, P>(
    vertices: &mut Vec<V>,
    params: &mut Vec<P>,
    index: &mut HashMap<V, usize>,
    v: V,
    p: P,
) -> usize {
    if let Some(&i) = index.get(&v) {
        return i;
    }
    index.insert(v.clone(), vertices.len());
    vertices.push(v);
    params.push(p);
    vertices.len() - 1
}

/// The hom-category `Copara(X, Y)` over parameters of size at most `bound`,
/// with every reparametrisation by an enumerated mediator.
pub fn copara_hom<K: FiniteCategory>(
    act: &ActionInstance<K>,
    x: &FinSet,
    y: &FinSet,
    bound: usize,
    ceiling: usize,
) -> Result<HomCategory<CoparaCell<K::Mor>, FinSet, K::Mor>> {
    let k = &act.category;
    let params = FinSet::up_to(bound);
    let total: u128 = params
        .iter()
        .map(|m| k.hom_count(x, &act.act(m, y).carrier).saturating_mul(params.iter().map(|n| k.hom_count(m, n)).sum()))
        .sum();
    guard(total, ceiling)?;
    let (mut vertices, mut ps, mut index) = (Vec::new(), Vec::new(), HashMap::new());
    for m in &params {
        for f in k.hom(x, &act.act(m, y).carrier, ceiling)? {
            let cell = CoparaCell::new(x.clone(), y.clone(), m.clone(), f)?;
            intern(&mut vertices, &mut ps, &mut index, cell, m.clone());
        }
    }
    let mut edges = Vec::new();
    let base = vertices.len();
    for v in 0..base {
        let from: CoparaCell<K::Mor> = vertices[v].clone();
        for n in &params {
            for r in k.hom(&from.param, n, ceiling)? {
                let map = k.compose(&from.map, &k.product(&r, &k.identity(y)))?;
                let to = CoparaCell::new(x.clone(), y.clone(), n.clone(), map)?;
                let t = intern(&mut vertices, &mut ps, &mut index, to, n.clone());
                edges.push(HomEdge { from: v, to: t, mediator: r });
            }
        }
    }
    Ok(HomCategory { vertices, params: ps, edges, orientation: Orientation::default() })
}

/// The hom-category `Para(X, Y)` over parameters of size at most `bound`.
/// A mediator `r: M → N` runs from `(N, g)` to `(M, (r × X) ; g)`.
pub fn para_hom<K: FiniteCategory>(
    act: &ActionInstance<K>,
    x: &FinSet,
    y: &FinSet,
    bound: usize,
    ceiling: usize,
) -> Result<HomCategory<ParaCell<K::Mor>, FinSet, K::Mor>> {
    let k = &act.category;
    let params = FinSet::up_to(bound);
    let total: u128 = params
        .iter()
        .map(|n| k.hom_count(&act.act(n, x).carrier, y).saturating_mul(params.iter().map(|m| k.hom_count(m, n)).sum()))
        .sum();
    guard(total, ceiling)?;
    let (mut vertices, mut ps, mut index) = (Vec::new(), Vec::new(), HashMap::new());
    for m in &params {
        for g in k.hom(&act.act(m, x).carrier, y, ceiling)? {
            let cell = ParaCell::new(x.clone(), y.clone(), m.clone(), g)?;
            intern(&mut vertices, &mut ps, &mut index, cell, m.clone());
        }
    }
    let mut edges = Vec::new();
    let base = vertices.len();
    for v in 0..base {
        let from: ParaCell<K::Mor> = vertices[v].clone();
        for m in &params {
            for r in k.hom(m, &from.param, ceiling)? {
                let map = k.compose(&k.product(&r, &k.identity(x)), &from.map)?;
                let to = ParaCell::new(x.clone(), y.clone(), m.clone(), map)?;
                let t = intern(&mut vertices, &mut ps, &mut index, to, m.clone());
                edges.push(HomEdge { from: v, to: t, mediator: r });
            }
        }
    }
    Ok(HomCategory { vertices, params: ps, edges, orientation: Orientation::default() })
}

/// The parameter category itself, projecting identically onto its objects
/// and morphisms.
pub fn base_homcat(bound: usize, ceiling: usize) -> Result<HomCategory<FinSet, FinSet, FiniteFunction>> {
    let vertices = FinSet::up_to(bound);
    let mut edges = Vec::new();
    for (a, m) in vertices.iter().enumerate() {
        for (b, n) in vertices.iter().enumerate() {
            for r in FiniteFunction::enumerate(m, n, ceiling)? {
                edges.push(HomEdge { from: a, to: b, mediator: r });
            }
        }
    }
    Ok(HomCategory { params: vertices.clone(), vertices, edges, orientation: Orientation::default() })
}

/// `C(X, Y)` as a discrete hom-category lying over `dom`: every morphism
/// sits over `X` with only its identity 2-cell.
pub fn dom_hom(x: &FinSet, y: &FinSet, ceiling: usize) -> Result<HomCategory<FiniteFunction, FinSet, FiniteFunction>> {
    let vertices = FiniteFunction::enumerate(x, y, ceiling)?;
    let edges =
        (0..vertices.len()).map(|v| HomEdge { from: v, to: v, mediator: FiniteFunction::identity(x) }).collect();
    Ok(HomCategory { params: vec![x.clone(); vertices.len()], vertices, edges, orientation: Orientation::default() })
}

/// The residual a morphism is sent to: its domain.
pub fn dom_functor(f: &FiniteFunction) -> FinSet {
    f.dom().clone()
}

/// The oplax comparison `dom(f;g) → dom(f) ⊗ dom(g)`, `a ↦ (a, f(a))`.
pub fn dom_comparison(f: &FiniteFunction, g: &FiniteFunction) -> Result<FiniteFunction> {
    if f.cod() != g.dom() {
        return Err(Error::mismatch("dom comparison of non-composable maps"));
    }
    Ok(copy_functor(f).map)
}

/// `f: A → B` as the coparametrised morphism `a ↦ (a, f(a))` with parameter `A`.
pub fn copy_functor(f: &FiniteFunction) -> CoparaCell<FiniteFunction> {
    let w = ProductWitness::new(f.dom(), f.cod());
    let map = FiniteFunction::from_fn(f.dom().clone(), w.carrier.clone(), |a| w.pair(a, f.apply(a)))
        .expect("copy lands in A × B");
    CoparaCell { source: f.dom().clone(), target: f.cod().clone(), param: f.dom().clone(), map }
}

/// A 1-cell `I → J` of the matrix bicategory: an object over `I × J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatCell<O> {
    pub rows: FinSet,
    pub cols: FinSet,
    pub entry: O,
}

impl<O: Clone> MatCell<O> {
    pub fn new<B: Bifibration<Obj = O>>(inst: &B, rows: FinSet, cols: FinSet, entry: O) -> Result<Self> {
        if inst.base(&entry).size() != rows.size() * cols.size() {
            return Err(Error::invalid("matrix cell", "entry does not lie over rows × cols"));
        }
        Ok(MatCell { rows, cols, entry })
    }
}

/// The unit `Δ_! U` on `I`.
pub fn unit_mat_cell<B: Bifibration>(inst: &B, index: &FinSet) -> Result<MatCell<B::Obj>> {
    let entry = inst.pushforward(&diagonal(index), &inst.tensor_unit(index))?;
    Ok(MatCell { rows: index.clone(), cols: index.clone(), entry })
}

/// `π_IK!(π_IJ^* m ⊗ π_JK^* n)`.
pub fn mat_compose<B: Bifibration>(m: &MatCell<B::Obj>, n: &MatCell<B::Obj>, inst: &B) -> Result<MatCell<B::Obj>> {
    if m.cols != n.rows {
        return Err(Error::mismatch(format!(
            "matrix cell with {} columns composed with one of {} rows",
            m.cols.size(),
            n.rows.size()
        )));
    }
    MatCell::new(
        inst,
        m.rows.clone(),
        n.cols.clone(),
        residual_compose(inst, (&m.rows, &m.cols, &n.cols), &m.entry, &n.entry)?,
    )
}

#[cfg(test)]
mod tests;
