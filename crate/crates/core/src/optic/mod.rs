//! Mixed optics with explicit residuals, their composition, the sliding
//! relation and equivalence by connected components.

mod action;
mod sliding;

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use action::ActionInstance;
pub use sliding::{optic_equiv, optic_equiv_witness, Equivalence, SlidingGraph};

use crate::error::{guard, Error, Result};
use crate::fincat::{FinSet, FinSetCat, FiniteCategory, FiniteFunction, Morphism, ProductWitness};
use crate::lens::{Boundary, Lens};

/// A representative optic `(X, X') → (Y, Y')` with residual `M`:
/// `forward: X → M • Y` and `backward: Y' • M → X'`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawOptic<F>", bound(deserialize = "F: Morphism + Deserialize<'de>"))]
pub struct Optic<F> {
    source: Boundary,
    target: Boundary,
    residual: FinSet,
    forward: F,
    backward: F,
}

#[derive(Deserialize)]
struct RawOptic<F> {
    source: Boundary,
    target: Boundary,
    residual: FinSet,
    forward: F,
    backward: F,
}

impl<F: Morphism> TryFrom<RawOptic<F>> for Optic<F> {
    type Error = Error;
    fn try_from(raw: RawOptic<F>) -> Result<Self> {
        Optic::new(raw.source, raw.target, raw.residual, raw.forward, raw.backward)
    }
}

impl<F: Morphism> Optic<F> {
    pub fn new(source: Boundary, target: Boundary, residual: FinSet, forward: F, backward: F) -> Result<Self> {
        let my = ProductWitness::new(&residual, &target.view).carrier;
        let ym = ProductWitness::new(&target.update, &residual).carrier;
        if forward.dom() != &source.view || forward.cod() != &my {
            return Err(Error::invalid("optic", "forward must map X to M • Y"));
        }
        if backward.dom() != &ym || backward.cod() != &source.update {
            return Err(Error::invalid("optic", "backward must map Y' • M to X'"));
        }
        Ok(Optic { source, target, residual, forward, backward })
    }

    pub fn source(&self) -> &Boundary {
        &self.source
    }

    pub fn target(&self) -> &Boundary {
        &self.target
    }

    pub fn residual(&self) -> &FinSet {
        &self.residual
    }

    pub fn forward(&self) -> &F {
        &self.forward
    }

    pub fn backward(&self) -> &F {
        &self.backward
    }
}

impl<F: fmt::Debug> fmt::Debug for Optic<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Optic {} → {} via {}; forward {:?}; backward {:?}",
            self.source,
            self.target,
            self.residual.size(),
            self.forward,
            self.backward
        )
    }
}

/// Which end of a sliding edge the given optic sits at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlideDirection {
    /// The optic has residual `M = dom r`; the result has residual `cod r`.
    Forward,
    /// The optic has residual `N = cod r`; the result has residual `dom r`.
    Backward,
}

/// A reparametrisation `r: M → N` relating `from` (residual `M`) and `to`
/// (residual `N`): `to.forward = from.forward ; (r • Y)` and
/// `from.backward = (Y' • r) ; to.backward`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(deserialize = "F: Morphism + Deserialize<'de>"))]
pub struct SlidingEdge<F> {
    pub from: Optic<F>,
    pub to: Optic<F>,
    pub mediator: F,
}

impl<K: FiniteCategory> ActionInstance<K> {
    pub fn identity_optic(&self, b: &Boundary) -> Optic<K::Mor> {
        let w = self.act(&self.unit(), &b.view);
        let forward = FiniteFunction::from_fn(b.view.clone(), w.carrier.clone(), |x| w.pair(0, x)).expect("unitor");
        Optic {
            source: b.clone(),
            target: b.clone(),
            residual: self.unit(),
            forward: self.category.from_function(&forward),
            backward: self.category.from_function(&self.right_unitor(&b.update)),
        }
    }

    /// Whether `edge` satisfies both sliding equations.
    pub fn is_sliding_edge(&self, edge: &SlidingEdge<K::Mor>) -> bool {
        let k = &self.category;
        let (from, to, r) = (&edge.from, &edge.to, &edge.mediator);
        if from.source != to.source || from.target != to.target {
            return false;
        }
        if r.dom() != &from.residual || r.cod() != &to.residual {
            return false;
        }
        let fwd = k.compose(&from.forward, &k.product(r, &k.identity(&from.target.view)));
        let bwd = k.compose(&k.product(&k.identity(&from.target.update), r), &to.backward);
        fwd.as_ref() == Ok(&to.forward) && bwd.as_ref() == Ok(&from.backward)
    }

    /// A random optic `source → target` with the given residual, if one exists.
    pub fn sample_optic<R: Rng + ?Sized>(
        &self,
        source: &Boundary,
        target: &Boundary,
        residual: &FinSet,
        rng: &mut R,
    ) -> Option<Optic<K::Mor>> {
        let k = &self.category;
        let forward = k.sample(&source.view, &self.act(residual, &target.view).carrier, rng)?;
        let backward = k.sample(&self.act_right(&target.update, residual).carrier, &source.update, rng)?;
        Some(Optic { source: source.clone(), target: target.clone(), residual: residual.clone(), forward, backward })
    }

    /// Every optic `source → target` with the given residual.
    pub fn enumerate_optics(
        &self,
        source: &Boundary,
        target: &Boundary,
        residual: &FinSet,
        ceiling: usize,
    ) -> Result<Vec<Optic<K::Mor>>> {
        let k = &self.category;
        let my = self.act(residual, &target.view).carrier;
        let ym = self.act_right(&target.update, residual).carrier;
        guard(k.hom_count(&source.view, &my).saturating_mul(k.hom_count(&ym, &source.update)), ceiling)?;
        let fs = k.hom(&source.view, &my, ceiling)?;
        let bs = k.hom(&ym, &source.update, ceiling)?;
        let mut out = Vec::with_capacity(fs.len() * bs.len());
        for f in &fs {
            for b in &bs {
                out.push(Optic {
                    source: source.clone(),
                    target: target.clone(),
                    residual: residual.clone(),
                    forward: f.clone(),
                    backward: b.clone(),
                });
            }
        }
        Ok(out)
    }
}

/// `o1` followed by `o2`, with residual `M ⊗ N`.
///
/// Forward: `X → M•Y → M•(N•Z) → (M⊗N)•Z`. Backward:
/// `Z'•(M⊗N) → (Z'•N)•M → Y'•M → X'`.
pub fn optic_compose<K: FiniteCategory>(
    o1: &Optic<K::Mor>,
    o2: &Optic<K::Mor>,
    act: &ActionInstance<K>,
) -> Result<Optic<K::Mor>> {
    if o1.target != o2.source {
        return Err(Error::mismatch(format!("optic target {} differs from source {}", o1.target, o2.source)));
    }
    let k = &act.category;
    let (m, n) = (&o1.residual, &o2.residual);
    let z = &o2.target;
    let mn = ProductWitness::new(m, n);

    let whiskered = k.product(&k.identity(m), &o2.forward);
    let assoc = k.from_function(&act.multiplicator(m, n, &z.view));
    let forward = k.compose(&k.compose(&o1.forward, &whiskered)?, &assoc)?;

    let dom = act.act_right(&z.update, &mn.carrier);
    let zn = act.act_right(&z.update, n);
    let mid = act.act_right(&zn.carrier, m);
    let shuffle = FiniteFunction::from_fn(dom.carrier.clone(), mid.carrier.clone(), |k| {
        let (zp, p) = dom.unpair(k);
        let (a, b) = mn.unpair(p);
        mid.pair(zn.pair(zp, b), a)
    })?;
    let backward =
        k.compose(&k.compose(&k.from_function(&shuffle), &k.product(&o2.backward, &k.identity(m)))?, &o1.backward)?;
    Optic::new(o1.source.clone(), z.clone(), mn.carrier, forward, backward)
}

/// The other end of the sliding edge generated by `r` at `o`.
///
/// Sliding forward pushes `r` into the forward part and needs the backward
/// part to factor through `Y' • r`; sliding backward pulls `r` into the
/// backward part and needs the forward part to factor through `r • Y`. When
/// the factorisation does not exist or is not unique the slide is refused.
pub fn slide<K: FiniteCategory>(
    o: &Optic<K::Mor>,
    r: &K::Mor,
    direction: SlideDirection,
    act: &ActionInstance<K>,
) -> Result<SlidingEdge<K::Mor>> {
    let k = &act.category;
    let (y, yp) = (&o.target.view, &o.target.update);
    match direction {
        SlideDirection::Forward => {
            if r.dom() != &o.residual {
                return Err(Error::mismatch("mediator must start at the residual"));
            }
            let forward = k.compose(&o.forward, &k.product(r, &k.identity(y)))?;
            let rf = k
                .as_function(r)
                .filter(FiniteFunction::is_surjective)
                .ok_or_else(|| Error::SlideUndetermined("forward slide needs a surjective function".into()))?;
            let yr = k.product(&k.identity(yp), &k.from_function(&rf));
            let yr = k.as_function(&yr).expect("deterministic");
            let backward = k
                .descend_along_surjection(&o.backward, &yr)
                .ok_or_else(|| Error::SlideUndetermined("backward part does not factor through the mediator".into()))?;
            let to = Optic::new(o.source.clone(), o.target.clone(), r.cod().clone(), forward, backward)?;
            Ok(SlidingEdge { from: o.clone(), to, mediator: r.clone() })
        }
        SlideDirection::Backward => {
            if r.cod() != &o.residual {
                return Err(Error::mismatch("mediator must end at the residual"));
            }
            let backward = k.compose(&k.product(&k.identity(yp), r), &o.backward)?;
            let rf = k
                .as_function(r)
                .filter(FiniteFunction::is_injective)
                .ok_or_else(|| Error::SlideUndetermined("backward slide needs an injective function".into()))?;
            let ry = k.as_function(&k.product(&k.from_function(&rf), &k.identity(y))).expect("deterministic");
            let forward = k
                .lift_through_injection(&o.forward, &ry)
                .ok_or_else(|| Error::SlideUndetermined("forward part does not factor through the mediator".into()))?;
            let from = Optic::new(o.source.clone(), o.target.clone(), r.dom().clone(), forward, backward)?;
            Ok(SlidingEdge { from, to: o.clone(), mediator: r.clone() })
        }
    }
}

/// Collapses an optic for the cartesian action to a lens:
/// `get = π_Y ∘ forward` and `put(x, y') = backward(y', π_M(forward(x)))`.
pub fn normalize_cartesian<K: FiniteCategory>(o: &Optic<K::Mor>, act: &ActionInstance<K>) -> Result<Lens> {
    let k = &act.category;
    if !k.is_cartesian() {
        return Err(Error::Unsupported(format!("{} is not a cartesian action", k.name())));
    }
    let f = k.as_function(&o.forward).expect("cartesian morphisms are functions");
    let b = k.as_function(&o.backward).expect("cartesian morphisms are functions");
    let my = act.act(&o.residual, &o.target.view);
    let ym = act.act_right(&o.target.update, &o.residual);
    Lens::from_fns(
        o.source.clone(),
        o.target.clone(),
        |x| my.unpair(f.apply(x)).1,
        |x, yp| b.apply(ym.pair(yp, my.unpair(f.apply(x)).0)),
    )
}

/// The optic of a lens with residual `X`: `x ↦ (x, get x)` forward and
/// `(y', x) ↦ put(x, y')` backward.
pub fn optic_of_lens(l: &Lens) -> Optic<FiniteFunction> {
    let x = &l.source().view;
    let my = ProductWitness::new(x, &l.target().view);
    let ym = ProductWitness::new(&l.target().update, x);
    let forward =
        FiniteFunction::from_fn(x.clone(), my.carrier.clone(), |a| my.pair(a, l.get().apply(a))).expect("copy");
    let backward = FiniteFunction::from_fn(ym.carrier.clone(), l.source().update.clone(), |k| {
        let (yp, a) = ym.unpair(k);
        l.put_at(a, yp)
    })
    .expect("put");
    Optic { source: l.source().clone(), target: l.target().clone(), residual: x.clone(), forward, backward }
}

/// Number of optic representatives `source → target` with residual sizes
/// `0..=bound` over finite sets, saturating.
pub fn count_cartesian_representatives(source: &Boundary, target: &Boundary, bound: usize) -> u128 {
    let k = FinSetCat;
    (0..=bound)
        .map(|m| {
            let my = FinSet::new(m * target.view.size());
            let ym = FinSet::new(target.update.size() * m);
            k.hom_count(&source.view, &my).saturating_mul(k.hom_count(&ym, &source.update))
        })
        .fold(0u128, u128::saturating_add)
}

#[cfg(test)]
mod tests;
