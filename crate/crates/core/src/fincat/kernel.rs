use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::finset::{cartesian, FinSet, FiniteFunction, Morphism};
use super::rational::Rational;
use crate::error::{guard, Error, Result};

/// A probability distribution with finite support and exact weights.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteDistribution {
    carrier: FinSet,
    weights: Vec<Rational>,
}

impl FiniteDistribution {
    pub fn new(carrier: FinSet, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != carrier.size() {
            return Err(Error::invalid(
                "distribution",
                format!("{} weights for a carrier of size {}", weights.len(), carrier.size()),
            ));
        }
        if weights.iter().any(Rational::is_negative) {
            return Err(Error::invalid("distribution", "negative weight"));
        }
        let total: Rational = weights.iter().copied().sum();
        if !total.is_one() {
            return Err(Error::invalid("distribution", format!("weights sum to {total}")));
        }
        Ok(FiniteDistribution { carrier, weights })
    }

    pub fn dirac(carrier: &FinSet, point: usize) -> Self {
        let mut weights = vec![Rational::zero(); carrier.size()];
        weights[point] = Rational::one();
        FiniteDistribution { carrier: carrier.clone(), weights }
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> Rational {
        self.weights[i]
    }

    /// Points of positive weight, ascending.
    pub fn support(&self) -> impl Iterator<Item = (usize, Rational)> + '_ {
        self.weights.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, w)| (i, *w))
    }

    /// The point carrying all the mass, if there is one.
    pub fn as_point(&self) -> Option<usize> {
        let mut support = self.support();
        match (support.next(), support.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }

    /// Every distribution on `carrier` whose weights are multiples of `1/d`
    /// for some `d` in `denominators`, deduplicated and sorted.
    pub fn grid(carrier: &FinSet, denominators: &[u32]) -> Vec<FiniteDistribution> {
        let n = carrier.size();
        if n == 0 {
            return Vec::new();
        }
        let mut seen = BTreeSet::new();
        for &d in denominators.iter().filter(|&&d| d > 0) {
            for parts in compositions(d as usize, n) {
                let weights: Vec<Rational> =
                    parts.iter().map(|&k| Rational::new(k as i64, d as i64).expect("positive denominator")).collect();
                seen.insert(weights);
            }
        }
        seen.into_iter().map(|weights| FiniteDistribution { carrier: carrier.clone(), weights }).collect()
    }
}

impl fmt::Debug for FiniteDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.weights)
    }
}

/// Ordered ways to write `total` as `parts` non-negative integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A finite-support Markov kernel: one distribution over `cod` per element of `dom`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawKernel", into = "RawKernel")]
pub struct FiniteKernel {
    dom: FinSet,
    cod: FinSet,
    rows: Vec<FiniteDistribution>,
}

#[derive(Serialize, Deserialize)]
struct RawKernel {
    dom: FinSet,
    cod: FinSet,
    rows: Vec<Vec<Rational>>,
}

impl TryFrom<RawKernel> for FiniteKernel {
    type Error = Error;
    fn try_from(raw: RawKernel) -> Result<Self> {
        let rows =
            raw.rows.into_iter().map(|w| FiniteDistribution::new(raw.cod.clone(), w)).collect::<Result<Vec<_>>>()?;
        FiniteKernel::new(raw.dom, raw.cod, rows)
    }
}

impl From<FiniteKernel> for RawKernel {
    fn from(k: FiniteKernel) -> Self {
        RawKernel { rows: k.rows.into_iter().map(|r| r.weights).collect(), dom: k.dom, cod: k.cod }
    }
}

impl FiniteKernel {
    pub fn new(dom: FinSet, cod: FinSet, rows: Vec<FiniteDistribution>) -> Result<Self> {
        if rows.len() != dom.size() {
            return Err(Error::invalid("kernel", format!("{} rows for a domain of size {}", rows.len(), dom.size())));
        }
        if rows.iter().any(|r| r.carrier != cod) {
            return Err(Error::invalid("kernel", "row carrier differs from codomain"));
        }
        Ok(FiniteKernel { dom, cod, rows })
    }

    /// Builds a kernel from weight rows, validating each row.
    pub fn from_weights(dom: FinSet, cod: FinSet, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let rows = rows.into_iter().map(|w| FiniteDistribution::new(cod.clone(), w)).collect::<Result<Vec<_>>>()?;
        FiniteKernel::new(dom, cod, rows)
    }

    /// Builds a kernel from sparse rows `(point, weight)`; repeated points add up.
    pub fn from_sparse(dom: FinSet, cod: FinSet, rows: Vec<Vec<(usize, Rational)>>) -> Result<Self> {
        let dense = rows
            .into_iter()
            .map(|row| {
                let mut w = vec![Rational::zero(); cod.size()];
                for (p, x) in row {
                    if p >= cod.size() {
                        return Err(Error::invalid("kernel", format!("point {p} outside codomain")));
                    }
                    w[p] = w[p] + x;
                }
                Ok(w)
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteKernel::from_weights(dom, cod, dense)
    }

    pub fn dirac(f: &FiniteFunction) -> Self {
        FiniteKernel {
            dom: f.dom().clone(),
            cod: f.cod().clone(),
            rows: f.table().iter().map(|&b| FiniteDistribution::dirac(f.cod(), b)).collect(),
        }
    }

    pub fn identity(x: &FinSet) -> Self {
        FiniteKernel::dirac(&FiniteFunction::identity(x))
    }

    pub fn rows(&self) -> &[FiniteDistribution] {
        &self.rows
    }

    pub fn row(&self, a: usize) -> &FiniteDistribution {
        &self.rows[a]
    }

    pub fn weight(&self, a: usize, b: usize) -> Rational {
        self.rows[a].weights[b]
    }

    /// The underlying function when every row is a point mass.
    pub fn as_function(&self) -> Option<FiniteFunction> {
        let table = self.rows.iter().map(FiniteDistribution::as_point).collect::<Option<Vec<_>>>()?;
        FiniteFunction::new(self.dom.clone(), self.cod.clone(), table).ok()
    }

    /// `self` followed by `k`.
    pub fn then(&self, k: &FiniteKernel) -> Result<FiniteKernel> {
        compose_kernel(self, k)
    }

    /// Product kernel on the row-major product carriers.
    pub fn product(&self, other: &FiniteKernel) -> FiniteKernel {
        let cod = FinSet::new(self.cod.size() * other.cod.size());
        let width = other.cod.size();
        let mut rows = Vec::with_capacity(self.dom.size() * other.dom.size());
        for a in &self.rows {
            for b in &other.rows {
                let mut w = vec![Rational::zero(); cod.size()];
                for (i, x) in a.support() {
                    for (j, y) in b.support() {
                        w[i * width + j] = x * y;
                    }
                }
                rows.push(FiniteDistribution { carrier: cod.clone(), weights: w });
            }
        }
        FiniteKernel { dom: FinSet::new(self.dom.size() * other.dom.size()), cod, rows }
    }

    /// Coproduct of kernels on offset-encoded disjoint unions.
    pub fn sum(parts: &[FiniteKernel]) -> FiniteKernel {
        let dom = FinSet::new(parts.iter().map(|k| k.dom.size()).sum());
        let cod = FinSet::new(parts.iter().map(|k| k.cod.size()).sum());
        let mut rows = Vec::with_capacity(dom.size());
        let mut offset = 0;
        for k in parts {
            for r in &k.rows {
                let mut w = vec![Rational::zero(); cod.size()];
                for (i, x) in r.support() {
                    w[offset + i] = x;
                }
                rows.push(FiniteDistribution { carrier: cod.clone(), weights: w });
            }
            offset += k.cod.size();
        }
        FiniteKernel { dom, cod, rows }
    }

    /// All kernels `dom → cod` whose rows lie on the denominator grid.
    pub fn grid(dom: &FinSet, cod: &FinSet, denominators: &[u32], ceiling: usize) -> Result<Vec<FiniteKernel>> {
        let rows = FiniteDistribution::grid(cod, denominators);
        let count = super::finset::pow(rows.len() as u128, dom.size());
        guard(count, ceiling)?;
        let choices = vec![rows; dom.size()];
        Ok(cartesian(&choices)
            .into_iter()
            .map(|rows| FiniteKernel { dom: dom.clone(), cod: cod.clone(), rows })
            .collect())
    }
}

impl Morphism for FiniteKernel {
    fn dom(&self) -> &FinSet {
        &self.dom
    }
    fn cod(&self) -> &FinSet {
        &self.cod
    }
}

impl fmt::Debug for FiniteKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}->{:?}{:?}", self.dom, self.cod, self.rows)
    }
}

/// Kleisli composite: `result[a][c] = Σ_b k1[a][b] · k2[b][c]`.
pub fn compose_kernel(k1: &FiniteKernel, k2: &FiniteKernel) -> Result<FiniteKernel> {
    if k1.cod != k2.dom {
        return Err(Error::mismatch(format!(
            "cannot compose kernels: codomain {:?} is not domain {:?}",
            k1.cod, k2.dom
        )));
    }
    let rows = k1
        .rows
        .iter()
        .map(|row| {
            let mut w = vec![Rational::zero(); k2.cod.size()];
            for (b, x) in row.support() {
                for (c, y) in k2.rows[b].support() {
                    w[c] = w[c] + x * y;
                }
            }
            FiniteDistribution { carrier: k2.cod.clone(), weights: w }
        })
        .collect();
    Ok(FiniteKernel { dom: k1.dom.clone(), cod: k2.cod.clone(), rows })
}
