use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{ActionInstance, Optic, SlidingEdge};
use crate::error::{guard, Error, Result};
use crate::fincat::{FinSet, FiniteCategory, Morphism};
use crate::lens::Boundary;
use crate::unionfind::Components;
use crate::DEFAULT_CEILING;

/// All optic representatives `source → target` with residual of size at most
/// `residual_bound`, joined by every sliding edge whose mediator lives in the
/// enumerated hom-sets.
///
/// When the category only enumerates a grid of its morphisms (kernels), a
/// composite that falls off the grid is added as an extra vertex so the
/// edge is kept.
pub struct SlidingGraph<F> {
    source: Boundary,
    target: Boundary,
    residual_bound: usize,
    vertices: Vec<Optic<F>>,
    index: HashMap<Optic<F>, usize>,
    edges: Vec<(usize, usize, F)>,
    components: Components,
}

impl<F> SlidingGraph<F>
where
    F: Morphism + Clone + Eq + std::hash::Hash,
{
    pub fn build<K: FiniteCategory<Mor = F>>(
        act: &ActionInstance<K>,
        source: &Boundary,
        target: &Boundary,
        residual_bound: usize,
        ceiling: usize,
    ) -> Result<Self> {
        let k = &act.category;
        let sizes: Vec<FinSet> = FinSet::up_to(residual_bound);
        let mut edge_estimate: u128 = 0;
        for m in &sizes {
            for n in &sizes {
                let c = k
                    .hom_count(m, n)
                    .saturating_mul(k.hom_count(&source.view, &act.act(m, &target.view).carrier))
                    .saturating_mul(k.hom_count(&act.act_right(&target.update, n).carrier, &source.update));
                edge_estimate = edge_estimate.saturating_add(c);
            }
        }
        guard(edge_estimate, ceiling)?;

        let mut graph = SlidingGraph {
            source: source.clone(),
            target: target.clone(),
            residual_bound,
            vertices: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            components: Components::new(0),
        };
        for m in &sizes {
            for o in act.enumerate_optics(source, target, m, ceiling)? {
                graph.insert(o);
            }
        }
        let (y, yp) = (&target.view, &target.update);
        for m in &sizes {
            let fs = k.hom(&source.view, &act.act(m, y).carrier, ceiling)?;
            for n in &sizes {
                let bs = k.hom(&act.act_right(yp, n).carrier, &source.update, ceiling)?;
                for r in k.hom(m, n, ceiling)? {
                    let ry = k.product(&r, &k.identity(y));
                    let ypr = k.product(&k.identity(yp), &r);
                    let pushed: Vec<F> = fs.iter().map(|f| k.compose(f, &ry)).collect::<Result<_>>()?;
                    let pulled: Vec<F> = bs.iter().map(|b| k.compose(&ypr, b)).collect::<Result<_>>()?;
                    for (f, fr) in fs.iter().zip(&pushed) {
                        for (b, rb) in bs.iter().zip(&pulled) {
                            let from = graph.insert(Optic {
                                source: source.clone(),
                                target: target.clone(),
                                residual: m.clone(),
                                forward: f.clone(),
                                backward: rb.clone(),
                            });
                            let to = graph.insert(Optic {
                                source: source.clone(),
                                target: target.clone(),
                                residual: n.clone(),
                                forward: fr.clone(),
                                backward: b.clone(),
                            });
                            graph.edges.push((from, to, r.clone()));
                        }
                    }
                }
            }
        }
        let mut components = Components::new(graph.vertices.len());
        for (a, b, _) in &graph.edges {
            components.union(*a, *b);
        }
        graph.components = components;
        Ok(graph)
    }

    fn insert(&mut self, o: Optic<F>) -> usize {
        if let Some(&i) = self.index.get(&o) {
            return i;
        }
        let i = self.vertices.len();
        self.index.insert(o.clone(), i);
        self.vertices.push(o);
        i
    }

    pub fn source(&self) -> &Boundary {
        &self.source
    }

    pub fn target(&self) -> &Boundary {
        &self.target
    }

    pub fn residual_bound(&self) -> usize {
        self.residual_bound
    }

    pub fn vertices(&self) -> &[Optic<F>] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn component_count(&self) -> usize {
        self.components.count()
    }

    /// Component id of every vertex, numbered by first appearance.
    pub fn labels(&self) -> Vec<usize> {
        self.components.labels()
    }

    pub fn index_of(&self, o: &Optic<F>) -> Option<usize> {
        self.index.get(o).copied()
    }

    pub fn edge(&self, i: usize) -> SlidingEdge<F> {
        let (a, b, r) = &self.edges[i];
        SlidingEdge { from: self.vertices[*a].clone(), to: self.vertices[*b].clone(), mediator: r.clone() }
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        self.components.same(a, b)
    }

    /// A shortest chain of sliding edges from vertex `a` to vertex `b`, each
    /// traversed in either orientation.
    pub fn path(&self, a: usize, b: usize) -> Option<Vec<SlidingEdge<F>>> {
        if !self.connected(a, b) {
            return None;
        }
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.vertices.len()];
        for (e, (u, v, _)) in self.edges.iter().enumerate() {
            adjacency[*u].push((*v, e));
            adjacency[*v].push((*u, e));
        }
        let mut via: Vec<Option<(usize, usize)>> = vec![None; self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([a]);
        seen[a] = true;
        while let Some(u) = queue.pop_front() {
            if u == b {
                break;
            }
            for &(v, e) in &adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    via[v] = Some((u, e));
                    queue.push_back(v);
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = b;
        while let Some((prev, e)) = via[cur] {
            path.push(self.edge(e));
            cur = prev;
        }
        path.reverse();
        Some(path)
    }
}

/// Result of a bounded equivalence check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
#[serde(bound(deserialize = "F: Morphism + Deserialize<'de>"))]
pub enum Equivalence<F> {
    /// The two optics are joined by this chain of sliding edges.
    Connected { path: Vec<SlidingEdge<F>> },
    /// No chain exists among residuals within the bound. This does not prove
    /// the optics inequivalent.
    NotConnectedWithinBound,
}

fn prepare<K: FiniteCategory>(
    o1: &Optic<K::Mor>,
    o2: &Optic<K::Mor>,
    residual_bound: usize,
    act: &ActionInstance<K>,
) -> Result<(SlidingGraph<K::Mor>, usize, usize)> {
    if o1.source != o2.source || o1.target != o2.target {
        return Err(Error::mismatch("optics have different boundaries"));
    }
    for o in [o1, o2] {
        if o.residual.size() > residual_bound {
            return Err(Error::ResidualBound { size: o.residual.size(), bound: residual_bound });
        }
    }
    let mut graph = SlidingGraph::build(act, &o1.source, &o1.target, residual_bound, DEFAULT_CEILING)?;
    let known = graph.vertices.len();
    let a = graph.insert(o1.clone());
    let b = graph.insert(o2.clone());
    if graph.vertices.len() > known {
        graph.components.grow(graph.vertices.len());
    }
    Ok((graph, a, b))
}

/// Whether `o1` and `o2` are joined by sliding edges among optics with
/// residual of size at most `residual_bound`.
pub fn optic_equiv<K: FiniteCategory>(
    o1: &Optic<K::Mor>,
    o2: &Optic<K::Mor>,
    residual_bound: usize,
    act: &ActionInstance<K>,
) -> Result<bool> {
    let (graph, a, b) = prepare(o1, o2, residual_bound, act)?;
    Ok(graph.connected(a, b))
}

/// As [`optic_equiv`], returning the connecting chain of sliding edges.
pub fn optic_equiv_witness<K: FiniteCategory>(
    o1: &Optic<K::Mor>,
    o2: &Optic<K::Mor>,
    residual_bound: usize,
    act: &ActionInstance<K>,
) -> Result<Equivalence<K::Mor>> {
    let (graph, a, b) = prepare(o1, o2, residual_bound, act)?;
    Ok(match graph.path(a, b) {
        Some(path) => Equivalence::Connected { path },
        None => Equivalence::NotConnectedWithinBound,
    })
}
