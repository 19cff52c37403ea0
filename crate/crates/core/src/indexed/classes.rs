use std::collections::HashMap;
use std::sync::Mutex;

use super::{backward_carrier, forward_carrier, IndexedFamily, IndexedOptic, ResidualMatrix};
use crate::error::{guard, Result};
use crate::fincat::{cartesian, pow, tuples, FiniteCategory, Morphism};
use crate::lens::Boundary;
use crate::optic::ActionInstance;
use crate::unionfind::Components;

/// Carrier sizes and offsets of one row `(M_j)_j` against targets `(Y_j, Y'_j)`.
struct RowShape {
    fwd_offsets: Vec<usize>,
    fwd_size: usize,
    bwd_offsets: Vec<usize>,
    bwd_size: usize,
}

impl RowShape {
    fn new(m: &[usize], targets: &[Boundary]) -> Self {
        let mut fwd_offsets = Vec::with_capacity(m.len());
        let mut bwd_offsets = Vec::with_capacity(m.len());
        let (mut f, mut b) = (0, 0);
        for (mj, t) in m.iter().zip(targets) {
            fwd_offsets.push(f);
            bwd_offsets.push(b);
            f += mj * t.view.size();
            b += t.update.size() * mj;
        }
        RowShape { fwd_offsets, fwd_size: f, bwd_offsets, bwd_size: b }
    }
}

fn digits(mut code: usize, radix: usize, len: usize, out: &mut Vec<usize>) {
    out.clear();
    for _ in 0..len {
        out.push(code % radix);
        code /= radix;
    }
}

fn undigits(ds: impl Iterator<Item = usize>, radix: usize) -> usize {
    let mut acc = 0;
    let mut scale = 1;
    for d in ds {
        acc += d * scale;
        scale *= radix;
    }
    acc
}

/// Number of sliding classes of one row of a cartesian indexed optic:
/// triples `((M_j)_j, f: X → Σ_j M_j × Y_j, b: Σ_j Y'_j × M_j → X')` with
/// every `M_j` of size at most `entry_bound`, under sliding along matrix
/// morphisms.
///
/// Sliding along a family `(r_j)` is the composite of slides that change one
/// entry at a time, and every intermediate row stays within the bound, so
/// single-entry mediators generate the relation.
pub fn row_class_count(source: &Boundary, targets: &[Boundary], entry_bound: usize, ceiling: usize) -> Result<u64> {
    let (x, xp) = (source.view.size(), source.update.size());
    let radix = entry_bound + 1;
    let rows = tuples(targets.len(), radix);
    let shapes: Vec<RowShape> = rows.iter().map(|m| RowShape::new(m, targets)).collect();
    let mut base = Vec::with_capacity(rows.len());
    let mut nbs = Vec::with_capacity(rows.len());
    let mut total: u128 = 0;
    for s in &shapes {
        base.push(total as usize);
        let nf = pow(s.fwd_size as u128, x);
        let nb = pow(xp as u128, s.bwd_size);
        nbs.push(nb as usize);
        total = total.saturating_add(nf.saturating_mul(nb));
        guard(total, ceiling)?;
    }
    let code = |m: &[usize]| m.iter().fold(0, |acc, &v| acc * radix + v);

    let mut uf = Components::new(total as usize);
    let mut fd = Vec::new();
    let mut bd = Vec::new();
    for (mi, m) in rows.iter().enumerate() {
        let sm = &shapes[mi];
        let nf_m = pow(sm.fwd_size as u128, x) as usize;
        for j in 0..targets.len() {
            let y = targets[j].view.size();
            for c in 0..radix {
                let mut n = m.clone();
                n[j] = c;
                let ni = code(&n);
                let sn = &shapes[ni];
                let nf_n = pow(sn.fwd_size as u128, x) as usize;
                for r in tuples(m[j], c) {
                    // r • Y on forward carriers
                    let mut fwd = vec![0; sm.fwd_size];
                    for (jj, t) in targets.iter().enumerate() {
                        let width = m[jj] * t.view.size();
                        for p in 0..width {
                            fwd[sm.fwd_offsets[jj] + p] = if jj == j {
                                let (a, yy) = (p / y, p % y);
                                sn.fwd_offsets[j] + r[a] * y + yy
                            } else {
                                sn.fwd_offsets[jj] + p
                            };
                        }
                    }
                    // Y' • r on backward carriers
                    let mut bwd = vec![0; sm.bwd_size];
                    for (jj, t) in targets.iter().enumerate() {
                        let width = t.update.size() * m[jj];
                        for p in 0..width {
                            bwd[sm.bwd_offsets[jj] + p] = if jj == j {
                                let (d, a) = (p / m[j], p % m[j]);
                                sn.bwd_offsets[j] + d * c + r[a]
                            } else {
                                sn.bwd_offsets[jj] + p
                            };
                        }
                    }
                    let pushed: Vec<usize> = (0..nf_m)
                        .map(|fi| {
                            digits(fi, sm.fwd_size, x, &mut fd);
                            undigits(fd.iter().map(|&v| fwd[v]), sn.fwd_size)
                        })
                        .collect();
                    for bi in 0..nbs[ni] {
                        digits(bi, xp, sn.bwd_size, &mut bd);
                        let pulled = undigits(bwd.iter().map(|&t| bd[t]), xp);
                        for (fi, &fnew) in pushed.iter().enumerate() {
                            let from = base[mi] + fi * nbs[mi] + pulled;
                            let to = base[ni] + fnew * nbs[ni] + bi;
                            uf.union(from, to);
                        }
                    }
                    debug_assert!(nf_n == 0 || pushed.iter().all(|&v| v < nf_n));
                }
            }
        }
    }
    Ok(uf.count() as u64)
}

/// Memoised row class counts, shareable across threads.
#[derive(Default)]
pub struct RowClassCache {
    map: Mutex<HashMap<(Boundary, Vec<Boundary>, usize), u64>>,
}

impl RowClassCache {
    pub fn new() -> Self {
        RowClassCache::default()
    }

    pub fn get(&self, source: &Boundary, targets: &[Boundary], entry_bound: usize, ceiling: usize) -> Result<u64> {
        let key = (source.clone(), targets.to_vec(), entry_bound);
        if let Some(&v) = self.map.lock().expect("cache lock").get(&key) {
            return Ok(v);
        }
        let v = row_class_count(source, targets, entry_bound, ceiling)?;
        self.map.lock().expect("cache lock").insert(key, v);
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Number of sliding classes of cartesian indexed optics `src → tgt` with
/// matrix entries of size at most `entry_bound`.
///
/// The representatives are tuples of independent rows, and every vertex has
/// an identity slide, so the classes of the whole hom are tuples of row
/// classes.
pub fn count_indexed_classes(
    src: &IndexedFamily,
    tgt: &IndexedFamily,
    entry_bound: usize,
    ceiling: usize,
) -> Result<u128> {
    count_indexed_classes_cached(src, tgt, entry_bound, ceiling, &RowClassCache::new())
}

pub fn count_indexed_classes_cached(
    src: &IndexedFamily,
    tgt: &IndexedFamily,
    entry_bound: usize,
    ceiling: usize,
    cache: &RowClassCache,
) -> Result<u128> {
    let mut total: u128 = 1;
    for b in src.components() {
        total = total.saturating_mul(cache.get(b, tgt.components(), entry_bound, ceiling)? as u128);
    }
    Ok(total)
}

/// The full sliding graph of indexed optics `src → tgt` with entries of size
/// at most `entry_bound`, with every matrix morphism as a mediator. Feasible
/// only at very small sizes; it is the reference the row-wise count is
/// checked against, and the equivalence used for non-cartesian actions.
pub struct IndexedSlidingGraph<F> {
    vertices: Vec<IndexedOptic<F>>,
    index: HashMap<IndexedOptic<F>, usize>,
    edge_count: usize,
    components: Components,
}

impl<F> IndexedSlidingGraph<F>
where
    F: Morphism + Clone + Eq + std::hash::Hash,
{
    pub fn build<K: FiniteCategory<Mor = F>>(
        act: &ActionInstance<K>,
        src: &IndexedFamily,
        tgt: &IndexedFamily,
        entry_bound: usize,
        ceiling: usize,
    ) -> Result<Self> {
        let k = &act.category;
        let matrices = ResidualMatrix::all(src.len(), tgt.len(), entry_bound);
        let mut g = IndexedSlidingGraph {
            vertices: Vec::new(),
            index: HashMap::new(),
            edge_count: 0,
            components: Components::new(0),
        };
        let mut edges = Vec::new();
        for m in &matrices {
            for o in act.enumerate_indexed(src, tgt, m, ceiling)? {
                g.insert(o);
            }
            guard(g.vertices.len() as u128, ceiling)?;
        }
        let ys = tgt.components();
        for m in &matrices {
            let fwd_opts: Vec<Vec<F>> = src
                .components()
                .iter()
                .enumerate()
                .map(|(i, b)| k.hom(&b.view, forward_carrier(m.row(i), ys, act).0.carrier(), ceiling))
                .collect::<Result<_>>()?;
            for n in &matrices {
                let bwd_opts: Vec<Vec<F>> = src
                    .components()
                    .iter()
                    .enumerate()
                    .map(|(i, b)| k.hom(backward_carrier(n.row(i), ys, act).0.carrier(), &b.update, ceiling))
                    .collect::<Result<_>>()?;
                let entry_homs: Vec<Vec<F>> = (0..src.len())
                    .flat_map(|i| (0..tgt.len()).map(move |j| (i, j)))
                    .map(|(i, j)| k.hom(m.entry(i, j), n.entry(i, j), ceiling))
                    .collect::<Result<_>>()?;
                for r in cartesian(&entry_homs) {
                    let rr = |i: usize, j: usize| &r[i * tgt.len() + j];
                    let push: Vec<F> = (0..src.len())
                        .map(|i| {
                            k.sum(
                                &(0..tgt.len())
                                    .map(|j| k.product(rr(i, j), &k.identity(&ys[j].view)))
                                    .collect::<Vec<_>>(),
                            )
                        })
                        .collect();
                    let pull: Vec<F> = (0..src.len())
                        .map(|i| {
                            k.sum(
                                &(0..tgt.len())
                                    .map(|j| k.product(&k.identity(&ys[j].update), rr(i, j)))
                                    .collect::<Vec<_>>(),
                            )
                        })
                        .collect();
                    for fs in cartesian(&fwd_opts) {
                        let pushed: Vec<F> =
                            fs.iter().zip(&push).map(|(f, p)| k.compose(f, p)).collect::<Result<_>>()?;
                        for bs in cartesian(&bwd_opts) {
                            let pulled: Vec<F> =
                                bs.iter().zip(&pull).map(|(b, p)| k.compose(p, b)).collect::<Result<_>>()?;
                            let from = g.insert(IndexedOptic {
                                source: src.clone(),
                                target: tgt.clone(),
                                matrix: m.clone(),
                                forwards: fs.clone(),
                                backwards: pulled,
                            });
                            let to = g.insert(IndexedOptic {
                                source: src.clone(),
                                target: tgt.clone(),
                                matrix: n.clone(),
                                forwards: pushed.clone(),
                                backwards: bs.clone(),
                            });
                            edges.push((from, to));
                            guard(edges.len() as u128, ceiling)?;
                        }
                    }
                }
            }
        }
        let mut uf = Components::new(g.vertices.len());
        for (a, b) in &edges {
            uf.union(*a, *b);
        }
        g.edge_count = edges.len();
        g.components = uf;
        Ok(g)
    }

    fn insert(&mut self, o: IndexedOptic<F>) -> usize {
        if let Some(&i) = self.index.get(&o) {
            return i;
        }
        let i = self.vertices.len();
        self.index.insert(o.clone(), i);
        self.vertices.push(o);
        i
    }

    pub fn vertices(&self) -> &[IndexedOptic<F>] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn component_count(&self) -> usize {
        self.components.count()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.components.labels()
    }

    pub fn index_of(&self, o: &IndexedOptic<F>) -> Option<usize> {
        self.index.get(o).copied()
    }
}
