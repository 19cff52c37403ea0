use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinSet, FiniteFunction, Morphism, ProductWitness};

/// The projections `I×J → I` and `I×J → J`.
pub fn pair_projections(i: &FinSet, j: &FinSet) -> (FiniteFunction, FiniteFunction) {
    let w = ProductWitness::new(i, j);
    (w.proj_left(), w.proj_right())
}

/// `Δ: I → I×I`.
pub fn diagonal(i: &FinSet) -> FiniteFunction {
    let w = ProductWitness::new(i, i);
    FiniteFunction::from_fn(i.clone(), w.carrier.clone(), |x| w.pair(x, x)).expect("diagonal is well formed")
}

/// Projections out of `I×J×K`, encoded as `(I×J)×K` row-major.
#[derive(Clone, Debug)]
pub struct TripleProjections {
    pub carrier: FinSet,
    pub ij: FiniteFunction,
    pub jk: FiniteFunction,
    pub ik: FiniteFunction,
}

pub fn triple_projections(i: &FinSet, j: &FinSet, k: &FinSet) -> TripleProjections {
    let (ni, nj, nk) = (i.size(), j.size(), k.size());
    let carrier = FinSet::new(ni * nj * nk);
    let split = |t: usize| (t / (nj * nk), (t / nk) % nj, t % nk);
    let ij = FiniteFunction::from_fn(carrier.clone(), FinSet::new(ni * nj), |t| {
        let (a, b, _) = split(t);
        a * nj + b
    });
    let jk = FiniteFunction::from_fn(carrier.clone(), FinSet::new(nj * nk), |t| {
        let (_, b, c) = split(t);
        b * nk + c
    });
    let ik = FiniteFunction::from_fn(carrier.clone(), FinSet::new(ni * nk), |t| {
        let (a, _, c) = split(t);
        a * nk + c
    });
    TripleProjections {
        carrier,
        ij: ij.expect("projection is well formed"),
        jk: jk.expect("projection is well formed"),
        ik: ik.expect("projection is well formed"),
    }
}

/// A commutative square `p;f = q;g` with corner `P`:
///
/// ```text
///   P --q--> B
///   |        |
///   p        g
///   v        v
///   A --f--> C
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackSquare {
    pub p: FiniteFunction,
    pub q: FiniteFunction,
    pub f: FiniteFunction,
    pub g: FiniteFunction,
}

impl PullbackSquare {
    /// The square exhibiting `I×J` as the pullback of `I → 1 ← J`.
    pub fn product(i: &FinSet, j: &FinSet) -> Self {
        let (p, q) = pair_projections(i, j);
        let one = FinSet::new(1);
        PullbackSquare {
            p,
            q,
            f: FiniteFunction::constant(i, &one, 0).expect("terminal map"),
            g: FiniteFunction::constant(j, &one, 0).expect("terminal map"),
        }
    }

    /// The canonical pullback of a cospan, with `P` the pairs `(a, b)` such
    /// that `f(a) = g(b)` in lexicographic order.
    pub fn canonical(f: &FiniteFunction, g: &FiniteFunction) -> Result<Self> {
        if f.cod() != g.cod() {
            return Err(Error::mismatch("cospan legs have different codomains"));
        }
        let pairs: Vec<(usize, usize)> = f
            .dom()
            .elements()
            .flat_map(|a| g.dom().elements().map(move |b| (a, b)))
            .filter(|&(a, b)| f.apply(a) == g.apply(b))
            .collect();
        let corner = FinSet::new(pairs.len());
        Ok(PullbackSquare {
            p: FiniteFunction::new(corner.clone(), f.dom().clone(), pairs.iter().map(|x| x.0).collect())?,
            q: FiniteFunction::new(corner, g.dom().clone(), pairs.iter().map(|x| x.1).collect())?,
            f: f.clone(),
            g: g.clone(),
        })
    }

    pub fn commutes(&self) -> bool {
        self.p.cod() == self.f.dom()
            && self.q.cod() == self.g.dom()
            && self.f.cod() == self.g.cod()
            && self.p.dom() == self.q.dom()
            && self.p.dom().elements().all(|x| self.f.apply(self.p.apply(x)) == self.g.apply(self.q.apply(x)))
    }

    /// Whether `x ↦ (p x, q x)` is a bijection onto the fibre product.
    pub fn is_pullback(&self) -> bool {
        if !self.commutes() {
            return false;
        }
        let nb = self.g.dom().size();
        let mut hit = vec![false; self.f.dom().size() * nb];
        for x in self.p.dom().elements() {
            let slot = &mut hit[self.p.apply(x) * nb + self.q.apply(x)];
            if *slot {
                return false;
            }
            *slot = true;
        }
        let matched = self
            .f
            .dom()
            .elements()
            .flat_map(|a| self.g.dom().elements().map(move |b| (a, b)))
            .filter(|&(a, b)| self.f.apply(a) == self.g.apply(b))
            .all(|(a, b)| hit[a * nb + b]);
        matched && hit.iter().filter(|&&h| h).count() == self.p.dom().size()
    }

    /// Every pullback square whose four corners have size at most `bound`.
    pub fn enumerate(bound: usize) -> Vec<PullbackSquare> {
        let sets = FinSet::up_to(bound);
        let all = |a: &FinSet, b: &FinSet| FiniteFunction::enumerate(a, b, usize::MAX).expect("no ceiling");
        let mut out = Vec::new();
        for c in &sets {
            for a in &sets {
                for f in all(a, c) {
                    for b in &sets {
                        for g in all(b, c) {
                            let Ok(canonical) = PullbackSquare::canonical(&f, &g) else { continue };
                            let corner = canonical.p.dom().clone();
                            if corner.size() > bound {
                                continue;
                            }
                            // every pullback is the canonical one relabelled by a bijection
                            for sigma in all(&corner, &corner).into_iter().filter(FiniteFunction::is_bijective) {
                                out.push(PullbackSquare {
                                    p: sigma.then(&canonical.p).expect("composable"),
                                    q: sigma.then(&canonical.q).expect("composable"),
                                    f: f.clone(),
                                    g: g.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}
