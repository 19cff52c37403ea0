//! Lenses over finite sets and dependent lenses between containers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};
use crate::fincat::{cartesian, pow, EnumerableCategory, FinSet, FiniteFunction, Morphism, ProductWitness};

/// A pair of objects `(X, X')`: what is viewed and what is written back.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Boundary {
    pub view: FinSet,
    pub update: FinSet,
}

impl Boundary {
    pub fn new(view: FinSet, update: FinSet) -> Self {
        Boundary { view, update }
    }

    pub fn sized(view: usize, update: usize) -> Self {
        Boundary::new(FinSet::new(view), FinSet::new(update))
    }

    /// Every boundary whose two sets have size at most `bound`.
    pub fn up_to(bound: usize) -> Vec<Boundary> {
        let mut out = Vec::new();
        for v in 0..=bound {
            for u in 0..=bound {
                out.push(Boundary::sized(v, u));
            }
        }
        out
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.view.size(), self.update.size())
    }
}

/// A lens `(X, X') → (Y, Y')`: `get: X → Y` and `put: X × Y' → X'`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLens")]
pub struct Lens {
    source: Boundary,
    target: Boundary,
    get: FiniteFunction,
    put: FiniteFunction,
}

#[derive(Deserialize)]
struct RawLens {
    source: Boundary,
    target: Boundary,
    get: FiniteFunction,
    put: FiniteFunction,
}

impl TryFrom<RawLens> for Lens {
    type Error = Error;
    fn try_from(raw: RawLens) -> Result<Self> {
        Lens::new(raw.source, raw.target, raw.get, raw.put)
    }
}

impl Lens {
    pub fn new(source: Boundary, target: Boundary, get: FiniteFunction, put: FiniteFunction) -> Result<Self> {
        if get.dom() != &source.view || get.cod() != &target.view {
            return Err(Error::invalid("lens", "get must map X to Y"));
        }
        let put_dom = ProductWitness::new(&source.view, &target.update).carrier;
        if put.dom() != &put_dom || put.cod() != &source.update {
            return Err(Error::invalid("lens", "put must map X × Y' to X'"));
        }
        Ok(Lens { source, target, get, put })
    }

    /// Builds a lens from pointwise rules.
    pub fn from_fns(
        source: Boundary,
        target: Boundary,
        get: impl Fn(usize) -> usize,
        put: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let pw = ProductWitness::new(&source.view, &target.update);
        let get = FiniteFunction::from_fn(source.view.clone(), target.view.clone(), get)?;
        let put = FiniteFunction::from_fn(pw.carrier.clone(), source.update.clone(), |k| {
            let (x, y) = pw.unpair(k);
            put(x, y)
        })?;
        Lens::new(source, target, get, put)
    }

    pub fn identity(b: &Boundary) -> Self {
        Lens::from_fns(b.clone(), b.clone(), |x| x, |_, x| x).expect("identity lens is well formed")
    }

    pub fn source(&self) -> &Boundary {
        &self.source
    }

    pub fn target(&self) -> &Boundary {
        &self.target
    }

    pub fn get(&self) -> &FiniteFunction {
        &self.get
    }

    pub fn put(&self) -> &FiniteFunction {
        &self.put
    }

    /// `put(x, y')`.
    pub fn put_at(&self, x: usize, y: usize) -> usize {
        self.put.apply(x * self.target.update.size() + y)
    }

    pub fn then(&self, other: &Lens) -> Result<Lens> {
        lens_compose(self, other)
    }

    /// `|Y|^|X| · |X'|^(|X|·|Y'|)`, saturating.
    pub fn count(source: &Boundary, target: &Boundary) -> u128 {
        let (x, xp, y, yp) = (source.view.size(), source.update.size(), target.view.size(), target.update.size());
        pow(y as u128, x).saturating_mul(pow(xp as u128, x * yp))
    }

    /// Every lens `source → target`, gets outermost.
    pub fn enumerate(source: &Boundary, target: &Boundary, ceiling: usize) -> Result<Vec<Lens>> {
        guard(Lens::count(source, target), ceiling)?;
        let pw = ProductWitness::new(&source.view, &target.update);
        let gets = FiniteFunction::enumerate(&source.view, &target.view, ceiling)?;
        let puts = FiniteFunction::enumerate(&pw.carrier, &source.update, ceiling)?;
        let mut out = Vec::with_capacity(gets.len() * puts.len());
        for g in &gets {
            for p in &puts {
                out.push(Lens { source: source.clone(), target: target.clone(), get: g.clone(), put: p.clone() });
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for Lens {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lens {} → {}; get {:?}; put {:?}", self.source, self.target, self.get.table(), self.put.table())
    }
}

/// `l1` followed by `l2`: `get = l2.get ∘ l1.get`, `put(x, z') = l1.put(x, l2.put(l1.get(x), z'))`.
pub fn lens_compose(l1: &Lens, l2: &Lens) -> Result<Lens> {
    if l1.target != l2.source {
        return Err(Error::mismatch(format!("lens target {} differs from source {}", l1.target, l2.source)));
    }
    Lens::from_fns(
        l1.source.clone(),
        l2.target.clone(),
        |x| l2.get.apply(l1.get.apply(x)),
        |x, z| l1.put_at(x, l2.put_at(l1.get.apply(x), z)),
    )
}

/// Lenses between boundaries of bounded size.
#[derive(Clone, Copy, Debug, Default)]
pub struct LensCategory;

impl EnumerableCategory for LensCategory {
    type Obj = Boundary;
    type Mor = Lens;

    fn objects(&self, size_bound: usize) -> Vec<Boundary> {
        Boundary::up_to(size_bound)
    }

    fn hom(&self, a: &Boundary, b: &Boundary, ceiling: usize) -> Result<Vec<Lens>> {
        Lens::enumerate(a, b, ceiling)
    }

    fn identity(&self, a: &Boundary) -> Lens {
        Lens::identity(a)
    }

    fn compose(&self, f: &Lens, g: &Lens) -> Result<Lens> {
        lens_compose(f, g)
    }
}

/// Positions `A` with a set of directions `B(a)` at each position.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawContainer")]
pub struct Container {
    positions: FinSet,
    directions: Vec<FinSet>,
}

#[derive(Deserialize)]
struct RawContainer {
    positions: FinSet,
    directions: Vec<FinSet>,
}

impl TryFrom<RawContainer> for Container {
    type Error = Error;
    fn try_from(raw: RawContainer) -> Result<Self> {
        Container::new(raw.positions, raw.directions)
    }
}

impl Container {
    pub fn new(positions: FinSet, directions: Vec<FinSet>) -> Result<Self> {
        if directions.len() != positions.size() {
            return Err(Error::invalid(
                "container",
                format!("{} direction sets for {} positions", directions.len(), positions.size()),
            ));
        }
        Ok(Container { positions, directions })
    }

    pub fn from_sizes(directions: &[usize]) -> Self {
        Container {
            positions: FinSet::new(directions.len()),
            directions: directions.iter().map(|&d| FinSet::new(d)).collect(),
        }
    }

    /// Every position has the same directions.
    pub fn constant(positions: &FinSet, directions: &FinSet) -> Self {
        Container { positions: positions.clone(), directions: vec![directions.clone(); positions.size()] }
    }

    pub fn positions(&self) -> &FinSet {
        &self.positions
    }

    pub fn directions(&self) -> &[FinSet] {
        &self.directions
    }

    pub fn direction(&self, a: usize) -> &FinSet {
        &self.directions[a]
    }

    pub fn direction_sizes(&self) -> Vec<usize> {
        self.directions.iter().map(FinSet::size).collect()
    }

    /// Containers with at most `bound` positions, each with at most `bound` directions.
    pub fn up_to(bound: usize) -> Vec<Container> {
        let mut out = Vec::new();
        for n in 0..=bound {
            for sizes in crate::fincat::tuples(n, bound + 1) {
                out.push(Container::from_sizes(&sizes));
            }
        }
        out
    }
}

impl fmt::Debug for Container {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Container{:?}", self.direction_sizes())
    }
}

/// A morphism of containers: positions forward, directions backward.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDepLens")]
pub struct DepLens {
    source: Container,
    target: Container,
    forward: FiniteFunction,
    backward: Vec<FiniteFunction>,
}

#[derive(Deserialize)]
struct RawDepLens {
    source: Container,
    target: Container,
    forward: FiniteFunction,
    backward: Vec<FiniteFunction>,
}

impl TryFrom<RawDepLens> for DepLens {
    type Error = Error;
    fn try_from(raw: RawDepLens) -> Result<Self> {
        DepLens::new(raw.source, raw.target, raw.forward, raw.backward)
    }
}

impl DepLens {
    pub fn new(
        source: Container,
        target: Container,
        forward: FiniteFunction,
        backward: Vec<FiniteFunction>,
    ) -> Result<Self> {
        if forward.dom() != source.positions() || forward.cod() != target.positions() {
            return Err(Error::invalid("dependent lens", "forward must map A to C"));
        }
        if backward.len() != source.positions().size() {
            return Err(Error::invalid("dependent lens", "one backward map per position"));
        }
        for (a, b) in backward.iter().enumerate() {
            if b.dom() != target.direction(forward.apply(a)) || b.cod() != source.direction(a) {
                return Err(Error::invalid(
                    "dependent lens",
                    format!("backward map at position {a} must map D(forward(a)) to B(a)"),
                ));
            }
        }
        Ok(DepLens { source, target, forward, backward })
    }

    pub fn identity(c: &Container) -> Self {
        DepLens {
            source: c.clone(),
            target: c.clone(),
            forward: FiniteFunction::identity(c.positions()),
            backward: c.directions().iter().map(FiniteFunction::identity).collect(),
        }
    }

    pub fn source(&self) -> &Container {
        &self.source
    }

    pub fn target(&self) -> &Container {
        &self.target
    }

    pub fn forward(&self) -> &FiniteFunction {
        &self.forward
    }

    pub fn backward(&self) -> &[FiniteFunction] {
        &self.backward
    }

    pub fn then(&self, other: &DepLens) -> Result<DepLens> {
        dlens_compose(self, other)
    }
}

impl fmt::Debug for DepLens {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let back: Vec<&[usize]> = self.backward.iter().map(|b| b.table()).collect();
        write!(
            f,
            "DepLens {:?} → {:?}; forward {:?}; backward {:?}",
            self.source,
            self.target,
            self.forward.table(),
            back
        )
    }
}

/// `d1` followed by `d2`.
pub fn dlens_compose(d1: &DepLens, d2: &DepLens) -> Result<DepLens> {
    if d1.target != d2.source {
        return Err(Error::mismatch(format!("container {:?} differs from {:?}", d1.target, d2.source)));
    }
    let forward = d1.forward.then(&d2.forward)?;
    let backward = d1
        .backward
        .iter()
        .enumerate()
        .map(|(a, b1)| d2.backward[d1.forward.apply(a)].then(b1))
        .collect::<Result<Vec<_>>>()?;
    Ok(DepLens { source: d1.source.clone(), target: d2.target.clone(), forward, backward })
}

/// `Π_a Σ_c |B(a)|^|D(c)|`, saturating at `u128::MAX`.
pub fn count_dlens_hom(src: &Container, tgt: &Container) -> u128 {
    src.directions()
        .iter()
        .map(|b| tgt.directions().iter().map(|d| pow(b.size() as u128, d.size())).fold(0u128, u128::saturating_add))
        .fold(1u128, u128::saturating_mul)
}

/// Every dependent lens `src → tgt`, in lexicographic order of the
/// per-position choices.
pub fn enumerate_dlens_hom(src: &Container, tgt: &Container, ceiling: usize) -> Result<Vec<DepLens>> {
    guard(count_dlens_hom(src, tgt), ceiling)?;
    let mut per_position = Vec::with_capacity(src.positions().size());
    for b in src.directions() {
        let mut options = Vec::new();
        for (c, d) in tgt.directions().iter().enumerate() {
            for f in FiniteFunction::enumerate(d, b, ceiling)? {
                options.push((c, f));
            }
        }
        per_position.push(options);
    }
    let out = cartesian(&per_position)
        .into_iter()
        .map(|choice| {
            let forward = FiniteFunction::new(
                src.positions().clone(),
                tgt.positions().clone(),
                choice.iter().map(|(c, _)| *c).collect(),
            )
            .expect("chosen positions are in range");
            DepLens {
                source: src.clone(),
                target: tgt.clone(),
                forward,
                backward: choice.into_iter().map(|(_, f)| f).collect(),
            }
        })
        .collect();
    Ok(out)
}

/// A lens as a dependent lens between constant containers.
pub fn lens_to_dlens(l: &Lens) -> DepLens {
    let src = Container::constant(&l.source.view, &l.source.update);
    let tgt = Container::constant(&l.target.view, &l.target.update);
    let backward = l
        .source
        .view
        .elements()
        .map(|x| {
            FiniteFunction::from_fn(l.target.update.clone(), l.source.update.clone(), |y| l.put_at(x, y))
                .expect("put lands in X'")
        })
        .collect();
    DepLens { source: src, target: tgt, forward: l.get.clone(), backward }
}

/// Dependent lenses between containers of bounded size.
#[derive(Clone, Copy, Debug, Default)]
pub struct DepLensCategory;

impl EnumerableCategory for DepLensCategory {
    type Obj = Container;
    type Mor = DepLens;

    fn objects(&self, size_bound: usize) -> Vec<Container> {
        Container::up_to(size_bound)
    }

    fn hom(&self, a: &Container, b: &Container, ceiling: usize) -> Result<Vec<DepLens>> {
        enumerate_dlens_hom(a, b, ceiling)
    }

    fn identity(&self, a: &Container) -> DepLens {
        DepLens::identity(a)
    }

    fn compose(&self, f: &DepLens, g: &DepLens) -> Result<DepLens> {
        dlens_compose(f, g)
    }
}

#[cfg(test)]
mod tests;
