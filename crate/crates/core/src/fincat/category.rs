use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

use super::finset::{FinSet, FiniteFunction, Morphism};
use super::kernel::{FiniteDistribution, FiniteKernel};
use super::rational::Rational;
use crate::error::{Error, Result};

/// A category whose objects are finite sets, with the row-major cartesian
/// product as symmetric monoidal structure and offset-encoded coproducts.
///
/// Morphisms are viewed uniformly as rows of weighted points: a function is a
/// kernel whose rows are point masses. Coherence bijections (associators,
/// unitors, reshufflings) are always built as functions and embedded with
/// [`FiniteCategory::from_function`].
pub trait FiniteCategory: Clone + Send + Sync {
    type Mor: Morphism + Clone + Eq + Hash + Debug + Serialize + DeserializeOwned + Send + Sync;

    fn name(&self) -> &'static str;

    /// Whether the monoidal product is the categorical product, so that
    /// optics collapse to lenses.
    fn is_cartesian(&self) -> bool;

    fn identity(&self, x: &FinSet) -> Self::Mor;

    /// `f` followed by `g`.
    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;

    fn from_function(&self, f: &FiniteFunction) -> Self::Mor;

    /// The deterministic part of a morphism, if it has one.
    fn as_function(&self, f: &Self::Mor) -> Option<FiniteFunction>;

    /// `f × g` on row-major product carriers.
    fn product(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;

    /// `f_0 + f_1 + ...` on offset-encoded coproducts.
    fn sum(&self, parts: &[Self::Mor]) -> Self::Mor;

    fn hom_count(&self, a: &FinSet, b: &FinSet) -> u128;

    /// Enumerates the (possibly grid-restricted) hom-set `a → b`.
    fn hom(&self, a: &FinSet, b: &FinSet, ceiling: usize) -> Result<Vec<Self::Mor>>;

    /// Weighted points of row `i`.
    fn row(&self, f: &Self::Mor, i: usize) -> Vec<(usize, Rational)>;

    fn from_rows(&self, dom: &FinSet, cod: &FinSet, rows: Vec<Vec<(usize, Rational)>>) -> Result<Self::Mor>;

    /// A morphism `a → b` drawn uniformly from the enumerated hom-set, or
    /// `None` when it is empty.
    fn sample<R: Rng + ?Sized>(&self, a: &FinSet, b: &FinSet, rng: &mut R) -> Option<Self::Mor>;

    /// `f'` with `f' ; inj = f`, when `inj` is injective and `f` lands in its image.
    fn lift_through_injection(&self, f: &Self::Mor, inj: &FiniteFunction) -> Option<Self::Mor> {
        if !inj.is_injective() || inj.cod() != f.cod() {
            return None;
        }
        let mut preimage = vec![None; inj.cod().size()];
        for (a, &b) in inj.table().iter().enumerate() {
            preimage[b] = Some(a);
        }
        let rows = (0..f.dom().size())
            .map(|x| self.row(f, x).into_iter().map(|(b, w)| preimage[b].map(|a| (a, w))).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        self.from_rows(f.dom(), inj.dom(), rows).ok()
    }

    /// `b'` with `surj ; b' = b`, when `surj` is onto and `b` is constant on its fibres.
    fn descend_along_surjection(&self, b: &Self::Mor, surj: &FiniteFunction) -> Option<Self::Mor> {
        if !surj.is_surjective() || surj.dom() != b.dom() {
            return None;
        }
        let mut rows: Vec<Option<Vec<(usize, Rational)>>> = vec![None; surj.cod().size()];
        for a in 0..surj.dom().size() {
            let row = self.row(b, a);
            match &rows[surj.apply(a)] {
                Some(existing) if *existing != row => return None,
                Some(_) => {}
                None => rows[surj.apply(a)] = Some(row),
            }
        }
        let rows = rows.into_iter().collect::<Option<Vec<_>>>()?;
        self.from_rows(surj.cod(), b.cod(), rows).ok()
    }
}

/// Finite sets and functions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FinSetCat;

impl FiniteCategory for FinSetCat {
    type Mor = FiniteFunction;

    fn name(&self) -> &'static str {
        "finset"
    }

    fn is_cartesian(&self) -> bool {
        true
    }

    fn identity(&self, x: &FinSet) -> FiniteFunction {
        FiniteFunction::identity(x)
    }

    fn compose(&self, f: &FiniteFunction, g: &FiniteFunction) -> Result<FiniteFunction> {
        f.then(g)
    }

    fn from_function(&self, f: &FiniteFunction) -> FiniteFunction {
        f.clone()
    }

    fn as_function(&self, f: &FiniteFunction) -> Option<FiniteFunction> {
        Some(f.clone())
    }

    fn product(&self, f: &FiniteFunction, g: &FiniteFunction) -> FiniteFunction {
        let w = g.cod().size();
        let dom = FinSet::new(f.dom().size() * g.dom().size());
        let cod = FinSet::new(f.cod().size() * w);
        let gd = g.dom().size();
        FiniteFunction::from_fn(dom, cod, |k| f.apply(k / gd) * w + g.apply(k % gd))
            .expect("product of functions is well formed")
    }

    fn sum(&self, parts: &[FiniteFunction]) -> FiniteFunction {
        let mut table = Vec::new();
        let mut offset = 0;
        for p in parts {
            table.extend(p.table().iter().map(|&v| v + offset));
            offset += p.cod().size();
        }
        FiniteFunction::new(FinSet::new(table.len()), FinSet::new(offset), table)
            .expect("sum of functions is well formed")
    }

    fn hom_count(&self, a: &FinSet, b: &FinSet) -> u128 {
        FiniteFunction::count(a, b)
    }

    fn hom(&self, a: &FinSet, b: &FinSet, ceiling: usize) -> Result<Vec<FiniteFunction>> {
        FiniteFunction::enumerate(a, b, ceiling)
    }

    fn row(&self, f: &FiniteFunction, i: usize) -> Vec<(usize, Rational)> {
        vec![(f.apply(i), Rational::one())]
    }

    fn from_rows(&self, dom: &FinSet, cod: &FinSet, rows: Vec<Vec<(usize, Rational)>>) -> Result<FiniteFunction> {
        let table = rows
            .into_iter()
            .map(|row| match row.as_slice() {
                [(p, w)] if w.is_one() => Ok(*p),
                _ => Err(Error::invalid("function", "row is not a point mass")),
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteFunction::new(dom.clone(), cod.clone(), table)
    }

    fn sample<R: Rng + ?Sized>(&self, a: &FinSet, b: &FinSet, rng: &mut R) -> Option<FiniteFunction> {
        if b.is_empty() && !a.is_empty() {
            return None;
        }
        let table = a.elements().map(|_| rng.gen_range(0..b.size())).collect();
        FiniteFunction::new(a.clone(), b.clone(), table).ok()
    }
}

/// Finite sets and finite-support Markov kernels with exact weights.
///
/// Hom-sets are uncountable, so enumeration is restricted to the kernels
/// whose rows have weights `k/d` for some `d` in `denominators`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinStochCat {
    pub denominators: Vec<u32>,
}

impl Default for FinStochCat {
    fn default() -> Self {
        FinStochCat { denominators: vec![1, 2, 3] }
    }
}

impl FinStochCat {
    pub fn with_grid(denominators: Vec<u32>) -> Self {
        FinStochCat { denominators }
    }
}

impl FiniteCategory for FinStochCat {
    type Mor = FiniteKernel;

    fn name(&self) -> &'static str {
        "finstoch"
    }

    fn is_cartesian(&self) -> bool {
        false
    }

    fn identity(&self, x: &FinSet) -> FiniteKernel {
        FiniteKernel::identity(x)
    }

    fn compose(&self, f: &FiniteKernel, g: &FiniteKernel) -> Result<FiniteKernel> {
        f.then(g)
    }

    fn from_function(&self, f: &FiniteFunction) -> FiniteKernel {
        FiniteKernel::dirac(f)
    }

    fn as_function(&self, f: &FiniteKernel) -> Option<FiniteFunction> {
        f.as_function()
    }

    fn product(&self, f: &FiniteKernel, g: &FiniteKernel) -> FiniteKernel {
        f.product(g)
    }

    fn sum(&self, parts: &[FiniteKernel]) -> FiniteKernel {
        FiniteKernel::sum(parts)
    }

    fn hom_count(&self, a: &FinSet, b: &FinSet) -> u128 {
        let rows = FiniteDistribution::grid(b, &self.denominators).len();
        super::finset::pow(rows as u128, a.size())
    }

    fn hom(&self, a: &FinSet, b: &FinSet, ceiling: usize) -> Result<Vec<FiniteKernel>> {
        FiniteKernel::grid(a, b, &self.denominators, ceiling)
    }

    fn row(&self, f: &FiniteKernel, i: usize) -> Vec<(usize, Rational)> {
        f.row(i).support().collect()
    }

    fn from_rows(&self, dom: &FinSet, cod: &FinSet, rows: Vec<Vec<(usize, Rational)>>) -> Result<FiniteKernel> {
        FiniteKernel::from_sparse(dom.clone(), cod.clone(), rows)
    }

    fn sample<R: Rng + ?Sized>(&self, a: &FinSet, b: &FinSet, rng: &mut R) -> Option<FiniteKernel> {
        let grid = FiniteDistribution::grid(b, &self.denominators);
        if grid.is_empty() && !a.is_empty() {
            return None;
        }
        let rows = a.elements().map(|_| grid[rng.gen_range(0..grid.len())].clone()).collect();
        FiniteKernel::new(a.clone(), b.clone(), rows).ok()
    }
}
