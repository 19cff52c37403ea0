//! Set-indexed optics: families of boundaries, residual matrices composed by
//! matrix multiplication, and normalisation to dependent lenses.

mod classes;
mod polynomial;

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use classes::{
    count_indexed_classes, count_indexed_classes_cached, row_class_count, IndexedSlidingGraph, RowClassCache,
};
pub use polynomial::{count_polynomial_nat, PolynomialCount};

use crate::error::{guard, Error, Result};
use crate::fincat::{cartesian, Coproduct, FinSet, FiniteCategory, FiniteFunction, Morphism, ProductWitness};
use crate::lens::{Boundary, Container, DepLens};
use crate::optic::{ActionInstance, Optic};

/// A family of boundaries `(X_i, X'_i)` indexed by a finite set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawFamily")]
pub struct IndexedFamily {
    index: FinSet,
    components: Vec<Boundary>,
}

#[derive(Deserialize)]
struct RawFamily {
    index: FinSet,
    components: Vec<Boundary>,
}

impl TryFrom<RawFamily> for IndexedFamily {
    type Error = Error;
    fn try_from(raw: RawFamily) -> Result<Self> {
        IndexedFamily::new(raw.index, raw.components)
    }
}

impl IndexedFamily {
    pub fn new(index: FinSet, components: Vec<Boundary>) -> Result<Self> {
        if components.len() != index.size() {
            return Err(Error::invalid("indexed family", "one component per index"));
        }
        Ok(IndexedFamily { index, components })
    }

    pub fn from_components(components: Vec<Boundary>) -> Self {
        IndexedFamily { index: FinSet::new(components.len()), components }
    }

    pub fn singleton(b: Boundary) -> Self {
        IndexedFamily::from_components(vec![b])
    }

    pub fn index(&self) -> &FinSet {
        &self.index
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Boundary] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Boundary {
        &self.components[i]
    }

    pub fn views(&self) -> Vec<FinSet> {
        self.components.iter().map(|b| b.view.clone()).collect()
    }

    pub fn updates(&self) -> Vec<FinSet> {
        self.components.iter().map(|b| b.update.clone()).collect()
    }

    /// The container with positions `Σ_i X_i` and directions `X'_i` at `(i, x)`.
    pub fn container(&self) -> Container {
        let mut dirs = Vec::new();
        for b in &self.components {
            for _ in b.view.elements() {
                dirs.push(b.update.size());
            }
        }
        Container::from_sizes(&dirs)
    }

    /// Families with index size at most `index_bound` and components of size
    /// at most `size_bound`.
    pub fn up_to(index_bound: usize, size_bound: usize) -> Vec<IndexedFamily> {
        let bs = Boundary::up_to(size_bound);
        let mut out = Vec::new();
        for n in 0..=index_bound {
            for choice in cartesian(&vec![bs.clone(); n]) {
                out.push(IndexedFamily::from_components(choice));
            }
        }
        out
    }

    /// Families whose components are all equal.
    pub fn constant_up_to(index_bound: usize, size_bound: usize) -> Vec<IndexedFamily> {
        let mut out = vec![IndexedFamily::from_components(Vec::new())];
        for n in 1..=index_bound {
            for b in Boundary::up_to(size_bound) {
                out.push(IndexedFamily::from_components(vec![b; n]));
            }
        }
        out
    }
}

impl fmt::Debug for IndexedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|b| b.to_string()).collect();
        write!(f, "Family[{}]", parts.join(" "))
    }
}

/// A grid of residual objects `M_i^j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct ResidualMatrix {
    rows: FinSet,
    cols: FinSet,
    entries: Vec<Vec<FinSet>>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: FinSet,
    cols: FinSet,
    entries: Vec<Vec<FinSet>>,
}

impl TryFrom<RawMatrix> for ResidualMatrix {
    type Error = Error;
    fn try_from(raw: RawMatrix) -> Result<Self> {
        ResidualMatrix::new(raw.rows, raw.cols, raw.entries)
    }
}

impl ResidualMatrix {
    pub fn new(rows: FinSet, cols: FinSet, entries: Vec<Vec<FinSet>>) -> Result<Self> {
        if entries.len() != rows.size() || entries.iter().any(|r| r.len() != cols.size()) {
            return Err(Error::invalid("residual matrix", "grid dimensions differ from rows × cols"));
        }
        Ok(ResidualMatrix { rows, cols, entries })
    }

    pub fn from_sizes(rows: usize, cols: usize, sizes: &[usize]) -> Result<Self> {
        if sizes.len() != rows * cols {
            return Err(Error::invalid("residual matrix", "grid dimensions differ from rows × cols"));
        }
        let entries = (0..rows).map(|i| (0..cols).map(|j| FinSet::new(sizes[i * cols + j])).collect()).collect();
        ResidualMatrix::new(FinSet::new(rows), FinSet::new(cols), entries)
    }

    pub fn rows(&self) -> &FinSet {
        &self.rows
    }

    pub fn cols(&self) -> &FinSet {
        &self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &FinSet {
        &self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[FinSet] {
        &self.entries[i]
    }

    pub fn sizes(&self) -> Vec<Vec<usize>> {
        self.entries.iter().map(|r| r.iter().map(FinSet::size).collect()).collect()
    }

    /// Every matrix of the given shape with entries of size at most `entry_bound`.
    pub fn all(rows: usize, cols: usize, entry_bound: usize) -> Vec<ResidualMatrix> {
        crate::fincat::tuples(rows * cols, entry_bound + 1)
            .into_iter()
            .map(|t| ResidualMatrix::from_sizes(rows, cols, &t).expect("shape matches"))
            .collect()
    }
}

impl fmt::Debug for ResidualMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{:?}", self.sizes())
    }
}

/// Unit on the diagonal, initial object elsewhere.
pub fn identity_matrix<K: FiniteCategory>(index: &FinSet, act: &ActionInstance<K>) -> ResidualMatrix {
    let entries = index
        .elements()
        .map(|i| index.elements().map(|j| if i == j { act.unit() } else { act.initial() }).collect())
        .collect();
    ResidualMatrix { rows: index.clone(), cols: index.clone(), entries }
}

/// `(MN)_i^k = Σ_j M_i^j ⊗ N_j^k`, summed over `j` ascending.
pub fn matrix_multiply<K: FiniteCategory>(
    m: &ResidualMatrix,
    n: &ResidualMatrix,
    act: &ActionInstance<K>,
) -> Result<ResidualMatrix> {
    if m.cols != n.rows {
        return Err(Error::mismatch(format!(
            "matrix with {} columns times matrix with {} rows",
            m.cols.size(),
            n.rows.size()
        )));
    }
    let entries = m
        .rows
        .elements()
        .map(|i| {
            n.cols
                .elements()
                .map(|k| {
                    let parts: Vec<FinSet> =
                        m.cols.elements().map(|j| act.tensor(&m.entries[i][j], &n.entries[j][k])).collect();
                    Coproduct::new(&parts).carrier().clone()
                })
                .collect()
        })
        .collect();
    Ok(ResidualMatrix { rows: m.rows.clone(), cols: n.cols.clone(), entries })
}

/// `Σ_j M_j • Y_j` for one row of residuals.
pub fn forward_carrier<K: FiniteCategory>(
    row: &[FinSet],
    targets: &[Boundary],
    act: &ActionInstance<K>,
) -> (Coproduct, Vec<ProductWitness>) {
    let ws: Vec<ProductWitness> = row.iter().zip(targets).map(|(m, t)| act.act(m, &t.view)).collect();
    let c = Coproduct::new(&ws.iter().map(|w| w.carrier.clone()).collect::<Vec<_>>());
    (c, ws)
}

/// `Σ_j Y'_j • M_j` for one row of residuals.
pub fn backward_carrier<K: FiniteCategory>(
    row: &[FinSet],
    targets: &[Boundary],
    act: &ActionInstance<K>,
) -> (Coproduct, Vec<ProductWitness>) {
    let ws: Vec<ProductWitness> = row.iter().zip(targets).map(|(m, t)| act.act_right(&t.update, m)).collect();
    let c = Coproduct::new(&ws.iter().map(|w| w.carrier.clone()).collect::<Vec<_>>());
    (c, ws)
}

/// An indexed optic: a residual matrix and, for each source index `i`,
/// `forward_i: X_i → Σ_j M_i^j • Y_j` and `backward_i: Σ_j Y'_j • M_i^j → X'_i`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawIndexedOptic<F>", bound(deserialize = "F: Morphism + Deserialize<'de>"))]
pub struct IndexedOptic<F> {
    source: IndexedFamily,
    target: IndexedFamily,
    matrix: ResidualMatrix,
    forwards: Vec<F>,
    backwards: Vec<F>,
}

#[derive(Deserialize)]
struct RawIndexedOptic<F> {
    source: IndexedFamily,
    target: IndexedFamily,
    matrix: ResidualMatrix,
    forwards: Vec<F>,
    backwards: Vec<F>,
}

impl<F: Morphism> TryFrom<RawIndexedOptic<F>> for IndexedOptic<F> {
    type Error = Error;
    fn try_from(raw: RawIndexedOptic<F>) -> Result<Self> {
        IndexedOptic::new(raw.source, raw.target, raw.matrix, raw.forwards, raw.backwards)
    }
}

fn row_carriers(row: &[FinSet], targets: &[Boundary]) -> (FinSet, FinSet) {
    let fwd = Coproduct::new(
        &row.iter().zip(targets).map(|(m, t)| ProductWitness::new(m, &t.view).carrier).collect::<Vec<_>>(),
    );
    let bwd = Coproduct::new(
        &row.iter().zip(targets).map(|(m, t)| ProductWitness::new(&t.update, m).carrier).collect::<Vec<_>>(),
    );
    (fwd.carrier().clone(), bwd.carrier().clone())
}

impl<F: Morphism> IndexedOptic<F> {
    pub fn new(
        source: IndexedFamily,
        target: IndexedFamily,
        matrix: ResidualMatrix,
        forwards: Vec<F>,
        backwards: Vec<F>,
    ) -> Result<Self> {
        if matrix.rows != source.index || matrix.cols != target.index {
            return Err(Error::invalid("indexed optic", "matrix shape differs from the index sets"));
        }
        if forwards.len() != source.len() || backwards.len() != source.len() {
            return Err(Error::invalid("indexed optic", "one forward and one backward part per source index"));
        }
        for (i, b) in source.components.iter().enumerate() {
            let (fc, bc) = row_carriers(&matrix.entries[i], &target.components);
            if forwards[i].dom() != &b.view || forwards[i].cod() != &fc {
                return Err(Error::invalid(
                    "indexed optic",
                    format!("forward part {i} must map X_i to Σ_j M_i^j • Y_j"),
                ));
            }
            if backwards[i].dom() != &bc || backwards[i].cod() != &b.update {
                return Err(Error::invalid(
                    "indexed optic",
                    format!("backward part {i} must map Σ_j Y'_j • M_i^j to X'_i"),
                ));
            }
        }
        Ok(IndexedOptic { source, target, matrix, forwards, backwards })
    }

    pub fn source(&self) -> &IndexedFamily {
        &self.source
    }

    pub fn target(&self) -> &IndexedFamily {
        &self.target
    }

    pub fn matrix(&self) -> &ResidualMatrix {
        &self.matrix
    }

    pub fn forwards(&self) -> &[F] {
        &self.forwards
    }

    pub fn backwards(&self) -> &[F] {
        &self.backwards
    }
}

impl<F: Morphism + Clone> IndexedOptic<F> {
    /// A plain optic seen as an optic between singleton families.
    pub fn from_optic(o: &Optic<F>) -> Self {
        IndexedOptic {
            source: IndexedFamily::singleton(o.source().clone()),
            target: IndexedFamily::singleton(o.target().clone()),
            matrix: ResidualMatrix::new(FinSet::new(1), FinSet::new(1), vec![vec![o.residual().clone()]]).expect("1×1"),
            forwards: vec![o.forward().clone()],
            backwards: vec![o.backward().clone()],
        }
    }

    /// The plain optic of a singleton-indexed optic.
    pub fn to_optic(&self) -> Result<Optic<F>> {
        if self.source.len() != 1 || self.target.len() != 1 {
            return Err(Error::Unsupported("only singleton families give plain optics".into()));
        }
        Optic::new(
            self.source.components[0].clone(),
            self.target.components[0].clone(),
            self.matrix.entries[0][0].clone(),
            self.forwards[0].clone(),
            self.backwards[0].clone(),
        )
    }
}

impl<F: fmt::Debug> fmt::Debug for IndexedOptic<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "IndexedOptic {:?} → {:?} via {:?}; forwards {:?}; backwards {:?}",
            self.source, self.target, self.matrix, self.forwards, self.backwards
        )
    }
}

impl<K: FiniteCategory> ActionInstance<K> {
    /// The identity indexed optic on the identity matrix.
    pub fn identity_indexed(&self, family: &IndexedFamily) -> IndexedOptic<K::Mor> {
        let matrix = identity_matrix(&family.index, self);
        let comps = &family.components;
        let mut forwards = Vec::with_capacity(comps.len());
        let mut backwards = Vec::with_capacity(comps.len());
        for (i, b) in comps.iter().enumerate() {
            let (fc, fw) = forward_carrier(&matrix.entries[i], comps, self);
            let (bc, bw) = backward_carrier(&matrix.entries[i], comps, self);
            let f = FiniteFunction::from_fn(b.view.clone(), fc.carrier().clone(), |x| fc.inj(i, fw[i].pair(0, x)))
                .expect("unitor");
            let g = FiniteFunction::from_fn(bc.carrier().clone(), b.update.clone(), |k| {
                let (j, p) = bc.case(k);
                debug_assert_eq!(j, i);
                bw[j].unpair(p).0
            })
            .expect("unitor");
            forwards.push(self.category.from_function(&f));
            backwards.push(self.category.from_function(&g));
        }
        IndexedOptic { source: family.clone(), target: family.clone(), matrix, forwards, backwards }
    }

    /// A random indexed optic `source → target` over the given matrix, if
    /// one exists.
    pub fn sample_indexed<R: Rng + ?Sized>(
        &self,
        source: &IndexedFamily,
        target: &IndexedFamily,
        matrix: &ResidualMatrix,
        rng: &mut R,
    ) -> Option<IndexedOptic<K::Mor>> {
        let k = &self.category;
        let mut forwards = Vec::with_capacity(source.len());
        let mut backwards = Vec::with_capacity(source.len());
        for (i, b) in source.components.iter().enumerate() {
            let (fc, bc) = row_carriers(&matrix.entries[i], &target.components);
            forwards.push(k.sample(&b.view, &fc, rng)?);
            backwards.push(k.sample(&bc, &b.update, rng)?);
        }
        Some(IndexedOptic {
            source: source.clone(),
            target: target.clone(),
            matrix: matrix.clone(),
            forwards,
            backwards,
        })
    }

    /// Every indexed optic `source → target` over the given matrix.
    pub fn enumerate_indexed(
        &self,
        source: &IndexedFamily,
        target: &IndexedFamily,
        matrix: &ResidualMatrix,
        ceiling: usize,
    ) -> Result<Vec<IndexedOptic<K::Mor>>> {
        let k = &self.category;
        let mut total: u128 = 1;
        let mut rows = Vec::with_capacity(source.len());
        for (i, b) in source.components.iter().enumerate() {
            let (fc, bc) = row_carriers(&matrix.entries[i], &target.components);
            total = total.saturating_mul(k.hom_count(&b.view, &fc)).saturating_mul(k.hom_count(&bc, &b.update));
            guard(total, ceiling)?;
            let fs = k.hom(&b.view, &fc, ceiling)?;
            let bs = k.hom(&bc, &b.update, ceiling)?;
            let mut pairs = Vec::with_capacity(fs.len() * bs.len());
            for f in &fs {
                for g in &bs {
                    pairs.push((f.clone(), g.clone()));
                }
            }
            rows.push(pairs);
        }
        Ok(cartesian(&rows)
            .into_iter()
            .map(|choice| {
                let (forwards, backwards) = choice.into_iter().unzip();
                IndexedOptic {
                    source: source.clone(),
                    target: target.clone(),
                    matrix: matrix.clone(),
                    forwards,
                    backwards,
                }
            })
            .collect())
    }
}

/// `o1` followed by `o2`, over the product matrix.
///
/// Forward at `i`: `X_i → Σ_j M_i^j•Y_j → Σ_j M_i^j•(Σ_k N_j^k•Z_k) → Σ_k (MN)_i^k•Z_k`,
/// the last map sending `(j, m, (k, n, z))` to `(k, (j, (m, n)), z)`.
/// Backward at `i`: `Σ_k Z'_k•(MN)_i^k → Σ_j (Σ_k Z'_k•N_j^k)•M_i^j → Σ_j Y'_j•M_i^j → X'_i`,
/// the first map sending `(k, z', (j, (m, n)))` to `(j, (k, z', n), m)`.
pub fn iopt_compose<K: FiniteCategory>(
    o1: &IndexedOptic<K::Mor>,
    o2: &IndexedOptic<K::Mor>,
    act: &ActionInstance<K>,
) -> Result<IndexedOptic<K::Mor>> {
    if o1.target != o2.source {
        return Err(Error::mismatch(format!(
            "indexed optic target {:?} differs from source {:?}",
            o1.target, o2.source
        )));
    }
    let k = &act.category;
    let (m, n) = (&o1.matrix, &o2.matrix);
    let mn = matrix_multiply(m, n, act)?;
    let (ys, zs) = (&o1.target.components, &o2.target.components);
    let nj: Vec<(Coproduct, Vec<ProductWitness>)> = n.entries.iter().map(|row| forward_carrier(row, zs, act)).collect();
    let nb: Vec<(Coproduct, Vec<ProductWitness>)> =
        n.entries.iter().map(|row| backward_carrier(row, zs, act)).collect();

    let mut forwards = Vec::with_capacity(o1.source.len());
    let mut backwards = Vec::with_capacity(o1.source.len());
    for i in 0..o1.source.len() {
        let row = &m.entries[i];
        // (j, m, n) ↦ position in (MN)_i^k, for each k
        let tensors: Vec<Vec<ProductWitness>> = (0..zs.len())
            .map(|kk| (0..ys.len()).map(|j| ProductWitness::new(&row[j], &n.entries[j][kk])).collect())
            .collect();
        let sums: Vec<Coproduct> = tensors
            .iter()
            .map(|ws| Coproduct::new(&ws.iter().map(|w| w.carrier.clone()).collect::<Vec<_>>()))
            .collect();

        let whisker: Vec<K::Mor> = (0..ys.len()).map(|j| k.product(&k.identity(&row[j]), &o2.forwards[j])).collect();
        let mid_w: Vec<ProductWitness> =
            (0..ys.len()).map(|j| ProductWitness::new(&row[j], nj[j].0.carrier())).collect();
        let mid = Coproduct::new(&mid_w.iter().map(|w| w.carrier.clone()).collect::<Vec<_>>());
        let (out, out_w) = forward_carrier(&mn.entries[i], zs, act);
        let reshuffle = FiniteFunction::from_fn(mid.carrier().clone(), out.carrier().clone(), |p| {
            let (j, q) = mid.case(p);
            let (a, r) = mid_w[j].unpair(q);
            let (kk, s) = nj[j].0.case(r);
            let (b, z) = nj[j].1[kk].unpair(s);
            let e = sums[kk].inj(j, tensors[kk][j].pair(a, b));
            out.inj(kk, out_w[kk].pair(e, z))
        })?;
        let forward = k.compose(&k.compose(&o1.forwards[i], &k.sum(&whisker))?, &k.from_function(&reshuffle))?;

        let (dom, dom_w) = backward_carrier(&mn.entries[i], zs, act);
        let mid_w: Vec<ProductWitness> =
            (0..ys.len()).map(|j| ProductWitness::new(nb[j].0.carrier(), &row[j])).collect();
        let mid = Coproduct::new(&mid_w.iter().map(|w| w.carrier.clone()).collect::<Vec<_>>());
        let unshuffle = FiniteFunction::from_fn(dom.carrier().clone(), mid.carrier().clone(), |p| {
            let (kk, q) = dom.case(p);
            let (zp, e) = dom_w[kk].unpair(q);
            let (j, t) = sums[kk].case(e);
            let (a, b) = tensors[kk][j].unpair(t);
            let inner = nb[j].0.inj(kk, nb[j].1[kk].pair(zp, b));
            mid.inj(j, mid_w[j].pair(inner, a))
        })?;
        let whisker: Vec<K::Mor> = (0..ys.len()).map(|j| k.product(&o2.backwards[j], &k.identity(&row[j]))).collect();
        let backward = k.compose(&k.compose(&k.from_function(&unshuffle), &k.sum(&whisker))?, &o1.backwards[i])?;
        forwards.push(forward);
        backwards.push(backward);
    }
    IndexedOptic::new(o1.source.clone(), o2.target.clone(), mn, forwards, backwards)
}

/// The dependent lens of a cartesian indexed optic: positions `Σ_i X_i`,
/// `(i, x) ↦ (j, y)` where `forward_i(x) = (j, m, y)`, and direction map
/// `y' ↦ backward_i(j, y', m)`.
pub fn iopt_to_dlens<K: FiniteCategory>(o: &IndexedOptic<K::Mor>, act: &ActionInstance<K>) -> Result<DepLens> {
    let k = &act.category;
    if !k.is_cartesian() {
        return Err(Error::Unsupported(format!("{} is not a cartesian action", k.name())));
    }
    let src = o.source.container();
    let tgt = o.target.container();
    let src_pos = Coproduct::new(&o.source.views());
    let tgt_pos = Coproduct::new(&o.target.views());
    let mut forward = Vec::with_capacity(src.positions().size());
    let mut backward = Vec::with_capacity(src.positions().size());
    for (i, b) in o.source.components.iter().enumerate() {
        let f = k.as_function(&o.forwards[i]).expect("cartesian morphisms are functions");
        let g = k.as_function(&o.backwards[i]).expect("cartesian morphisms are functions");
        let (fc, fw) = forward_carrier(&o.matrix.entries[i], &o.target.components, act);
        let (bc, bw) = backward_carrier(&o.matrix.entries[i], &o.target.components, act);
        for x in b.view.elements() {
            let (j, p) = fc.case(f.apply(x));
            let (m, y) = fw[j].unpair(p);
            forward.push(tgt_pos.inj(j, y));
            let yp = &o.target.components[j].update;
            backward
                .push(FiniteFunction::from_fn(yp.clone(), b.update.clone(), |d| g.apply(bc.inj(j, bw[j].pair(d, m))))?);
        }
    }
    debug_assert_eq!(src_pos.carrier().size(), forward.len());
    let forward = FiniteFunction::new(src.positions().clone(), tgt.positions().clone(), forward)?;
    DepLens::new(src, tgt, forward, backward)
}

#[cfg(test)]
mod tests;
