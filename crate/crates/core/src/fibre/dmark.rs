use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Bifibration, FibreArrow};
use crate::error::{guard, Error, Result};
use crate::fincat::{cartesian, FinSet, FiniteDistribution, FiniteFunction, FiniteKernel, Morphism, Rational};

/// A bundle `p: A → X` of finite sets.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DMarkObject {
    pub bundle: FiniteFunction,
}

impl DMarkObject {
    pub fn new(bundle: FiniteFunction) -> Self {
        DMarkObject { bundle }
    }

    pub fn from_table(base: usize, table: &[usize]) -> Result<Self> {
        Ok(DMarkObject { bundle: FiniteFunction::new(FinSet::new(table.len()), FinSet::new(base), table.to_vec())? })
    }

    pub fn carrier(&self) -> &FinSet {
        self.bundle.dom()
    }

    pub fn base(&self) -> &FinSet {
        self.bundle.cod()
    }

    pub fn project(&self, a: usize) -> usize {
        self.bundle.apply(a)
    }
}

impl fmt::Debug for DMarkObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bundle{:?}→{}", self.bundle.table(), self.base().size())
    }
}

/// A kernel between total spaces lying over a base function.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DMarkMorphism {
    pub kernel: FiniteKernel,
    pub base_map: FiniteFunction,
}

/// A point `b` receiving positive mass from `a` outside the fibre it must land in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportViolation {
    pub a: usize,
    pub b: usize,
    pub weight: Rational,
}

impl DMarkMorphism {
    /// `self` followed by `other`: kernels and base maps compose separately.
    pub fn then(&self, other: &DMarkMorphism) -> Result<DMarkMorphism> {
        Ok(DMarkMorphism { kernel: self.kernel.then(&other.kernel)?, base_map: self.base_map.then(&other.base_map)? })
    }

    /// All positive-weight entries `k(a)(b)` with `p_B(b) ≠ f(p_A(a))`.
    pub fn support_violations(&self, src: &DMarkObject, tgt: &DMarkObject) -> Result<Vec<SupportViolation>> {
        let k = &self.kernel;
        if k.dom() != src.carrier() || k.cod() != tgt.carrier() {
            return Err(Error::mismatch(format!(
                "kernel {:?} → {:?} between bundles with carriers {:?} and {:?}",
                k.dom(),
                k.cod(),
                src.carrier(),
                tgt.carrier()
            )));
        }
        if self.base_map.dom() != src.base() || self.base_map.cod() != tgt.base() {
            return Err(Error::mismatch(format!(
                "base map {:?} → {:?} between bases {:?} and {:?}",
                self.base_map.dom(),
                self.base_map.cod(),
                src.base(),
                tgt.base()
            )));
        }
        let mut out = Vec::new();
        for a in src.carrier().elements() {
            let want = self.base_map.apply(src.project(a));
            for (b, weight) in k.row(a).support() {
                if tgt.project(b) != want {
                    out.push(SupportViolation { a, b, weight });
                }
            }
        }
        Ok(out)
    }
}

/// Whether every positive-weight entry of the kernel lands in the fibre over
/// the image of its source point.
pub fn validate_dmark(m: &DMarkMorphism, src: &DMarkObject, tgt: &DMarkObject) -> Result<bool> {
    Ok(m.support_violations(src, tgt)?.is_empty())
}

/// Bundles over finite sets with fibre-preserving Markov kernels.
///
/// Hom-sets are enumerated over the kernels whose rows have weights `k/d`
/// with `d` in `denominators`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DMark {
    pub denominators: Vec<u32>,
}

impl Default for DMark {
    fn default() -> Self {
        DMark { denominators: vec![1, 2, 3] }
    }
}

type DArrow = FibreArrow<DMarkObject, FiniteKernel>;

/// The pairs `(x, y)` with `f(x) = g(y)`, in lexicographic order.
struct Pairs {
    pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl Pairs {
    fn new(f: &FiniteFunction, g: &FiniteFunction) -> Pairs {
        let pairs: Vec<(usize, usize)> = f
            .dom()
            .elements()
            .flat_map(|x| g.dom().elements().map(move |y| (x, y)))
            .filter(|&(x, y)| f.apply(x) == g.apply(y))
            .collect();
        let index = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        Pairs { pairs, index }
    }

    fn at(&self, x: usize, y: usize) -> Option<usize> {
        self.index.get(&(x, y)).copied()
    }

    fn carrier(&self) -> FinSet {
        FinSet::new(self.pairs.len())
    }
}

fn same_base(a: &DMarkObject, b: &DMarkObject) -> Result<()> {
    if a.base() != b.base() {
        return Err(Error::mismatch(format!("bundles over {:?} and {:?}", a.base(), b.base())));
    }
    Ok(())
}

fn deterministic(dom: &DMarkObject, cod: &DMarkObject, f: impl Fn(usize) -> usize) -> DArrow {
    let func = FiniteFunction::from_fn(dom.carrier().clone(), cod.carrier().clone(), f)
        .expect("structure map lands in its codomain");
    debug_assert!(dom.carrier().elements().all(|a| cod.project(func.apply(a)) == dom.project(a)));
    FibreArrow { dom: dom.clone(), cod: cod.clone(), map: FiniteKernel::dirac(&func) }
}

/// Re-indexes the rows of a kernel through pair encodings, failing when mass
/// lands outside the target carrier.
fn reindex(
    dom: &DMarkObject,
    cod: &DMarkObject,
    row: impl Fn(usize) -> Vec<(Option<usize>, Rational)>,
) -> Result<DArrow> {
    let rows = dom
        .carrier()
        .elements()
        .map(|a| {
            row(a)
                .into_iter()
                .map(|(b, w)| b.map(|b| (b, w)))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::invalid("bundle kernel", "mass leaves the fibre"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FibreArrow {
        dom: dom.clone(),
        cod: cod.clone(),
        map: FiniteKernel::from_sparse(dom.carrier().clone(), cod.carrier().clone(), rows)?,
    })
}

impl DMark {
    pub fn with_grid(denominators: Vec<u32>) -> Self {
        DMark { denominators }
    }

    /// The fibre arrow underlying a morphism over an identity base map.
    pub fn arrow(&self, m: &DMarkMorphism, src: &DMarkObject, tgt: &DMarkObject) -> Result<DArrow> {
        same_base(src, tgt)?;
        if m.base_map != FiniteFunction::identity(src.base()) {
            return Err(Error::invalid("fibre arrow", "base map is not the identity"));
        }
        if !validate_dmark(m, src, tgt)? {
            return Err(Error::invalid("fibre arrow", "kernel leaves the fibres"));
        }
        Ok(FibreArrow { dom: src.clone(), cod: tgt.clone(), map: m.kernel.clone() })
    }

    pub fn morphism(&self, a: &DArrow) -> DMarkMorphism {
        DMarkMorphism { kernel: a.map.clone(), base_map: FiniteFunction::identity(a.dom.base()) }
    }

    fn pulled(&self, f: &FiniteFunction, x: &DMarkObject) -> Result<(DMarkObject, Pairs)> {
        if f.cod() != x.base() {
            return Err(Error::mismatch(format!(
                "pullback along a map into {:?} of a bundle over {:?}",
                f.cod(),
                x.base()
            )));
        }
        let pairs = Pairs::new(f, &x.bundle);
        let bundle = FiniteFunction::new(pairs.carrier(), f.dom().clone(), pairs.pairs.iter().map(|p| p.0).collect())?;
        Ok((DMarkObject { bundle }, pairs))
    }

    fn tensored(&self, a: &DMarkObject, b: &DMarkObject) -> Result<(DMarkObject, Pairs)> {
        same_base(a, b)?;
        let pairs = Pairs::new(&a.bundle, &b.bundle);
        let bundle = FiniteFunction::new(
            pairs.carrier(),
            a.base().clone(),
            pairs.pairs.iter().map(|p| a.project(p.0)).collect(),
        )?;
        Ok((DMarkObject { bundle }, pairs))
    }
}

impl Bifibration for DMark {
    type Obj = DMarkObject;
    type Map = FiniteKernel;

    fn name(&self) -> &'static str {
        "dmark"
    }

    fn base(&self, x: &DMarkObject) -> FinSet {
        x.base().clone()
    }

    fn carrier_size(&self, x: &DMarkObject) -> usize {
        x.carrier().size()
    }

    fn objects_over(&self, base: &FinSet, bound: usize) -> Vec<DMarkObject> {
        (0..=bound)
            .flat_map(|n| FiniteFunction::enumerate(&FinSet::new(n), base, usize::MAX).expect("no ceiling"))
            .map(DMarkObject::new)
            .collect()
    }

    fn hom_count(&self, a: &DMarkObject, b: &DMarkObject) -> u128 {
        a.carrier().elements().fold(1u128, |acc, x| {
            let fibre = b.bundle.fibre(a.project(x)).len();
            acc.saturating_mul(FiniteDistribution::grid(&FinSet::new(fibre), &self.denominators).len() as u128)
        })
    }

    fn hom(&self, a: &DMarkObject, b: &DMarkObject, ceiling: usize) -> Result<Vec<DArrow>> {
        same_base(a, b)?;
        guard(self.hom_count(a, b), ceiling)?;
        let options: Vec<Vec<Vec<(usize, Rational)>>> = a
            .carrier()
            .elements()
            .map(|x| {
                let fibre = b.bundle.fibre(a.project(x));
                FiniteDistribution::grid(&FinSet::new(fibre.len()), &self.denominators)
                    .iter()
                    .map(|d| d.support().map(|(t, w)| (fibre[t], w)).collect())
                    .collect()
            })
            .collect();
        cartesian(&options)
            .into_iter()
            .map(|rows| {
                Ok(FibreArrow {
                    dom: a.clone(),
                    cod: b.clone(),
                    map: FiniteKernel::from_sparse(a.carrier().clone(), b.carrier().clone(), rows)?,
                })
            })
            .collect()
    }

    fn sample<R: Rng + ?Sized>(&self, a: &DMarkObject, b: &DMarkObject, rng: &mut R) -> Option<DArrow> {
        if a.base() != b.base() {
            return None;
        }
        let rows = a
            .carrier()
            .elements()
            .map(|x| {
                let fibre = b.bundle.fibre(a.project(x));
                let grid = FiniteDistribution::grid(&FinSet::new(fibre.len()), &self.denominators);
                if grid.is_empty() {
                    return None;
                }
                let d = &grid[rng.gen_range(0..grid.len())];
                Some(d.support().map(|(t, w)| (fibre[t], w)).collect())
            })
            .collect::<Option<Vec<_>>>()?;
        Some(FibreArrow {
            dom: a.clone(),
            cod: b.clone(),
            map: FiniteKernel::from_sparse(a.carrier().clone(), b.carrier().clone(), rows).ok()?,
        })
    }

    fn identity(&self, a: &DMarkObject) -> DArrow {
        FibreArrow { dom: a.clone(), cod: a.clone(), map: FiniteKernel::identity(a.carrier()) }
    }

    fn compose(&self, f: &DArrow, g: &DArrow) -> Result<DArrow> {
        if f.cod != g.dom {
            return Err(Error::mismatch(format!("fibre arrow into {:?} then out of {:?}", f.cod, g.dom)));
        }
        Ok(FibreArrow { dom: f.dom.clone(), cod: g.cod.clone(), map: f.map.then(&g.map)? })
    }

    fn inverse(&self, f: &DArrow) -> Option<DArrow> {
        let inv = f.map.as_function()?.inverse()?;
        Some(FibreArrow { dom: f.cod.clone(), cod: f.dom.clone(), map: FiniteKernel::dirac(&inv) })
    }

    fn pullback(&self, f: &FiniteFunction, x: &DMarkObject) -> Result<DMarkObject> {
        Ok(self.pulled(f, x)?.0)
    }

    fn pullback_arrow(&self, f: &FiniteFunction, m: &DArrow) -> Result<DArrow> {
        let (dom, src) = self.pulled(f, &m.dom)?;
        let (cod, tgt) = self.pulled(f, &m.cod)?;
        reindex(&dom, &cod, |p| {
            let (i, b) = src.pairs[p];
            m.map.row(b).support().map(|(b2, w)| (tgt.at(i, b2), w)).collect()
        })
    }

    fn pushforward(&self, f: &FiniteFunction, x: &DMarkObject) -> Result<DMarkObject> {
        Ok(DMarkObject { bundle: x.bundle.then(f)? })
    }

    fn pushforward_arrow(&self, f: &FiniteFunction, m: &DArrow) -> Result<DArrow> {
        Ok(FibreArrow { dom: self.pushforward(f, &m.dom)?, cod: self.pushforward(f, &m.cod)?, map: m.map.clone() })
    }

    fn unit(&self, f: &FiniteFunction, x: &DMarkObject) -> Result<DArrow> {
        let (cod, pairs) = self.pulled(f, &self.pushforward(f, x)?)?;
        Ok(deterministic(x, &cod, |a| pairs.at(x.project(a), a).expect("(p(a), a) is a pair")))
    }

    fn counit(&self, f: &FiniteFunction, z: &DMarkObject) -> Result<DArrow> {
        let (pulled, pairs) = self.pulled(f, z)?;
        let dom = self.pushforward(f, &pulled)?;
        Ok(deterministic(&dom, z, |p| pairs.pairs[p].1))
    }

    fn tensor(&self, a: &DMarkObject, b: &DMarkObject) -> Result<DMarkObject> {
        Ok(self.tensored(a, b)?.0)
    }

    fn tensor_arrow(&self, f: &DArrow, g: &DArrow) -> Result<DArrow> {
        let (dom, src) = self.tensored(&f.dom, &g.dom)?;
        let (cod, tgt) = self.tensored(&f.cod, &g.cod)?;
        reindex(&dom, &cod, |p| {
            let (a, b) = src.pairs[p];
            let mut out = Vec::new();
            for (a2, v) in f.map.row(a).support() {
                for (b2, w) in g.map.row(b).support() {
                    out.push((tgt.at(a2, b2), v * w));
                }
            }
            out
        })
    }

    fn tensor_unit(&self, base: &FinSet) -> DMarkObject {
        DMarkObject::new(FiniteFunction::identity(base))
    }

    fn associator(&self, a: &DMarkObject, b: &DMarkObject, c: &DMarkObject) -> Result<DArrow> {
        let (ab, ab_p) = self.tensored(a, b)?;
        let (dom, dom_p) = self.tensored(&ab, c)?;
        let (bc, bc_p) = self.tensored(b, c)?;
        let (cod, cod_p) = self.tensored(a, &bc)?;
        Ok(deterministic(&dom, &cod, |p| {
            let (q, z) = dom_p.pairs[p];
            let (x, y) = ab_p.pairs[q];
            cod_p.at(x, bc_p.at(y, z).expect("fibre pair")).expect("fibre pair")
        }))
    }

    fn symmetry(&self, a: &DMarkObject, b: &DMarkObject) -> Result<DArrow> {
        let (dom, dom_p) = self.tensored(a, b)?;
        let (cod, cod_p) = self.tensored(b, a)?;
        Ok(deterministic(&dom, &cod, |p| {
            let (x, y) = dom_p.pairs[p];
            cod_p.at(y, x).expect("fibre pair")
        }))
    }

    fn left_unitor(&self, a: &DMarkObject) -> Result<DArrow> {
        let (dom, pairs) = self.tensored(&self.tensor_unit(a.base()), a)?;
        Ok(deterministic(&dom, a, |p| pairs.pairs[p].1))
    }

    fn pullback_tensor(&self, f: &FiniteFunction, a: &DMarkObject, b: &DMarkObject) -> Result<DArrow> {
        let (fa, fa_p) = self.pulled(f, a)?;
        let (fb, fb_p) = self.pulled(f, b)?;
        let (dom, dom_p) = self.tensored(&fa, &fb)?;
        let (ab, ab_p) = self.tensored(a, b)?;
        let (cod, cod_p) = self.pulled(f, &ab)?;
        Ok(deterministic(&dom, &cod, |p| {
            let (u, v) = dom_p.pairs[p];
            let (i, x) = fa_p.pairs[u];
            let (_, y) = fb_p.pairs[v];
            cod_p.at(i, ab_p.at(x, y).expect("fibre pair")).expect("fibre pair")
        }))
    }

    fn pullback_compose(&self, f: &FiniteFunction, g: &FiniteFunction, x: &DMarkObject) -> Result<DArrow> {
        let (gx, gx_p) = self.pulled(g, x)?;
        let (dom, dom_p) = self.pulled(f, &gx)?;
        let (cod, cod_p) = self.pulled(&f.then(g)?, x)?;
        Ok(deterministic(&dom, &cod, |p| {
            let (i, u) = dom_p.pairs[p];
            cod_p.at(i, gx_p.pairs[u].1).expect("fibre pair")
        }))
    }

    fn pullback_identity(&self, x: &DMarkObject) -> Result<DArrow> {
        let (dom, pairs) = self.pulled(&FiniteFunction::identity(x.base()), x)?;
        Ok(deterministic(&dom, x, |p| pairs.pairs[p].1))
    }

    fn pushforward_compose(&self, f: &FiniteFunction, g: &FiniteFunction, x: &DMarkObject) -> Result<DArrow> {
        let dom = self.pushforward(&f.then(g)?, x)?;
        let cod = self.pushforward(g, &self.pushforward(f, x)?)?;
        Ok(deterministic(&dom, &cod, |a| a))
    }

    fn pushforward_identity(&self, x: &DMarkObject) -> Result<DArrow> {
        let dom = self.pushforward(&FiniteFunction::identity(x.base()), x)?;
        Ok(deterministic(&dom, x, |a| a))
    }
}
