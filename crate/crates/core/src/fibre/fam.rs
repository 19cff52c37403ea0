use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Arrow, Bifibration, FibreArrow};
use crate::error::{guard, Error, Result};
use crate::fincat::{
    cartesian, tuples, Coproduct, FinSet, FinSetCat, FiniteCategory, FiniteFunction, Morphism, ProductWitness,
};

/// A family of finite sets `(X_i)` indexed by `I`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawFam")]
pub struct FamObject {
    base: FinSet,
    family: Vec<FinSet>,
}

#[derive(Deserialize)]
struct RawFam {
    base: FinSet,
    family: Vec<FinSet>,
}

impl TryFrom<RawFam> for FamObject {
    type Error = Error;
    fn try_from(raw: RawFam) -> Result<Self> {
        FamObject::new(raw.base, raw.family)
    }
}

impl FamObject {
    pub fn new(base: FinSet, family: Vec<FinSet>) -> Result<Self> {
        if family.len() != base.size() {
            return Err(Error::invalid(
                "family",
                format!("{} components over a base of size {}", family.len(), base.size()),
            ));
        }
        Ok(FamObject { base, family })
    }

    pub fn from_sizes(sizes: &[usize]) -> Self {
        FamObject { base: FinSet::new(sizes.len()), family: sizes.iter().map(|&s| FinSet::new(s)).collect() }
    }

    pub fn base(&self) -> &FinSet {
        &self.base
    }

    pub fn family(&self) -> &[FinSet] {
        &self.family
    }

    pub fn component(&self, i: usize) -> &FinSet {
        &self.family[i]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.family.iter().map(FinSet::size).collect()
    }
}

impl fmt::Debug for FamObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fam{:?}", self.sizes())
    }
}

/// Families of finite sets: the fibre over `I` is the functor category `[I, FinSet]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Fam;

type FamArrow = FibreArrow<FamObject, Vec<FiniteFunction>>;

fn arrow(dom: &FamObject, cod: &FamObject, map: Vec<FiniteFunction>) -> FamArrow {
    debug_assert!(dom.base == cod.base && map.len() == dom.family.len());
    debug_assert!(map.iter().enumerate().all(|(i, f)| f.dom() == &dom.family[i] && f.cod() == &cod.family[i]));
    FibreArrow { dom: dom.clone(), cod: cod.clone(), map }
}

fn build(dom: &FamObject, cod: &FamObject, f: impl Fn(usize, usize) -> usize) -> FamArrow {
    let map = (0..dom.family.len())
        .map(|i| {
            FiniteFunction::from_fn(dom.family[i].clone(), cod.family[i].clone(), |x| f(i, x))
                .expect("structure map lands in its codomain")
        })
        .collect();
    arrow(dom, cod, map)
}

fn along(f: &FiniteFunction, end: &FinSet, base: &FinSet, what: &str) -> Result<()> {
    if end != base {
        return Err(Error::mismatch(format!(
            "{what} along a map {:?} → {:?} of a family over {:?}",
            f.dom(),
            f.cod(),
            base
        )));
    }
    Ok(())
}

fn same_base(a: &FamObject, b: &FamObject) -> Result<()> {
    if a.base != b.base {
        return Err(Error::mismatch(format!("families over {:?} and {:?}", a.base, b.base)));
    }
    Ok(())
}

impl Fam {
    /// `(f_! x)_j` as a coproduct over `f⁻¹(j)` ascending.
    fn fibre_sum(f: &FiniteFunction, x: &FamObject, j: usize) -> (Vec<usize>, Coproduct) {
        let fib = f.fibre(j);
        let c = Coproduct::new(&fib.iter().map(|&i| x.family[i].clone()).collect::<Vec<_>>());
        (fib, c)
    }
}

impl Bifibration for Fam {
    type Obj = FamObject;
    type Map = Vec<FiniteFunction>;

    fn name(&self) -> &'static str {
        "fam"
    }

    fn base(&self, x: &FamObject) -> FinSet {
        x.base.clone()
    }

    fn carrier_size(&self, x: &FamObject) -> usize {
        x.family.iter().map(FinSet::size).sum()
    }

    fn objects_over(&self, base: &FinSet, bound: usize) -> Vec<FamObject> {
        tuples(base.size(), bound + 1)
            .into_iter()
            .map(|sizes| FamObject { base: base.clone(), family: sizes.into_iter().map(FinSet::new).collect() })
            .collect()
    }

    fn hom_count(&self, a: &FamObject, b: &FamObject) -> u128 {
        a.family.iter().zip(&b.family).fold(1u128, |acc, (x, y)| acc.saturating_mul(FiniteFunction::count(x, y)))
    }

    fn hom(&self, a: &FamObject, b: &FamObject, ceiling: usize) -> Result<Vec<FamArrow>> {
        same_base(a, b)?;
        guard(self.hom_count(a, b), ceiling)?;
        let parts: Vec<Vec<FiniteFunction>> = a
            .family
            .iter()
            .zip(&b.family)
            .map(|(x, y)| FiniteFunction::enumerate(x, y, ceiling))
            .collect::<Result<_>>()?;
        Ok(cartesian(&parts).into_iter().map(|map| arrow(a, b, map)).collect())
    }

    fn sample<R: Rng + ?Sized>(&self, a: &FamObject, b: &FamObject, rng: &mut R) -> Option<FamArrow> {
        if a.base != b.base {
            return None;
        }
        let map = a.family.iter().zip(&b.family).map(|(x, y)| FinSetCat.sample(x, y, rng)).collect::<Option<_>>()?;
        Some(arrow(a, b, map))
    }

    fn identity(&self, a: &FamObject) -> FamArrow {
        arrow(a, a, a.family.iter().map(FiniteFunction::identity).collect())
    }

    fn compose(&self, f: &FamArrow, g: &FamArrow) -> Result<FamArrow> {
        if f.cod != g.dom {
            return Err(Error::mismatch(format!("fibre arrow into {:?} then out of {:?}", f.cod, g.dom)));
        }
        let map = f.map.iter().zip(&g.map).map(|(a, b)| a.then(b)).collect::<Result<_>>()?;
        Ok(arrow(&f.dom, &g.cod, map))
    }

    fn inverse(&self, f: &FamArrow) -> Option<FamArrow> {
        let map = f.map.iter().map(FiniteFunction::inverse).collect::<Option<_>>()?;
        Some(arrow(&f.cod, &f.dom, map))
    }

    fn pullback(&self, f: &FiniteFunction, x: &FamObject) -> Result<FamObject> {
        along(f, f.cod(), &x.base, "pullback")?;
        Ok(FamObject { base: f.dom().clone(), family: f.table().iter().map(|&j| x.family[j].clone()).collect() })
    }

    fn pullback_arrow(&self, f: &FiniteFunction, m: &FamArrow) -> Result<FamArrow> {
        let dom = self.pullback(f, &m.dom)?;
        let cod = self.pullback(f, &m.cod)?;
        Ok(arrow(&dom, &cod, f.table().iter().map(|&j| m.map[j].clone()).collect()))
    }

    fn pushforward(&self, f: &FiniteFunction, x: &FamObject) -> Result<FamObject> {
        along(f, f.dom(), &x.base, "pushforward")?;
        Ok(FamObject {
            base: f.cod().clone(),
            family: f.cod().elements().map(|j| Fam::fibre_sum(f, x, j).1.carrier().clone()).collect(),
        })
    }

    fn pushforward_arrow(&self, f: &FiniteFunction, m: &FamArrow) -> Result<FamArrow> {
        let dom = self.pushforward(f, &m.dom)?;
        let cod = self.pushforward(f, &m.cod)?;
        Ok(build(&dom, &cod, |j, p| {
            let (fib, src) = Fam::fibre_sum(f, &m.dom, j);
            let (_, tgt) = Fam::fibre_sum(f, &m.cod, j);
            let (t, x) = src.case(p);
            tgt.inj(t, m.map[fib[t]].apply(x))
        }))
    }

    fn unit(&self, f: &FiniteFunction, x: &FamObject) -> Result<FamArrow> {
        let cod = self.pullback(f, &self.pushforward(f, x)?)?;
        Ok(build(x, &cod, |i, a| {
            let (fib, c) = Fam::fibre_sum(f, x, f.apply(i));
            let t = fib.iter().position(|&k| k == i).expect("i lies in its own fibre");
            c.inj(t, a)
        }))
    }

    fn counit(&self, f: &FiniteFunction, z: &FamObject) -> Result<FamArrow> {
        let pulled = self.pullback(f, z)?;
        let dom = self.pushforward(f, &pulled)?;
        Ok(build(&dom, z, |j, p| Fam::fibre_sum(f, &pulled, j).1.case(p).1))
    }

    fn tensor(&self, a: &FamObject, b: &FamObject) -> Result<FamObject> {
        same_base(a, b)?;
        Ok(FamObject {
            base: a.base.clone(),
            family: a.family.iter().zip(&b.family).map(|(x, y)| ProductWitness::new(x, y).carrier).collect(),
        })
    }

    fn tensor_arrow(&self, f: &FamArrow, g: &FamArrow) -> Result<FamArrow> {
        let dom = self.tensor(&f.dom, &g.dom)?;
        let cod = self.tensor(&f.cod, &g.cod)?;
        Ok(build(&dom, &cod, |i, p| {
            let (x, y) = ProductWitness::new(&f.dom.family[i], &g.dom.family[i]).unpair(p);
            ProductWitness::new(&f.cod.family[i], &g.cod.family[i]).pair(f.map[i].apply(x), g.map[i].apply(y))
        }))
    }

    fn tensor_unit(&self, base: &FinSet) -> FamObject {
        FamObject { base: base.clone(), family: vec![FinSet::new(1); base.size()] }
    }

    fn associator(&self, a: &FamObject, b: &FamObject, c: &FamObject) -> Result<FamArrow> {
        let dom = self.tensor(&self.tensor(a, b)?, c)?;
        let cod = self.tensor(a, &self.tensor(b, c)?)?;
        Ok(build(&dom, &cod, |i, p| {
            let ab = ProductWitness::new(&a.family[i], &b.family[i]);
            let bc = ProductWitness::new(&b.family[i], &c.family[i]);
            let (q, z) = ProductWitness::new(&ab.carrier, &c.family[i]).unpair(p);
            let (x, y) = ab.unpair(q);
            ProductWitness::new(&a.family[i], &bc.carrier).pair(x, bc.pair(y, z))
        }))
    }

    fn symmetry(&self, a: &FamObject, b: &FamObject) -> Result<FamArrow> {
        let dom = self.tensor(a, b)?;
        let cod = self.tensor(b, a)?;
        Ok(build(&dom, &cod, |i, p| {
            let (x, y) = ProductWitness::new(&a.family[i], &b.family[i]).unpair(p);
            ProductWitness::new(&b.family[i], &a.family[i]).pair(y, x)
        }))
    }

    fn left_unitor(&self, a: &FamObject) -> Result<FamArrow> {
        let dom = self.tensor(&self.tensor_unit(&a.base), a)?;
        Ok(build(&dom, a, |i, p| ProductWitness::new(&FinSet::new(1), &a.family[i]).unpair(p).1))
    }

    fn pullback_tensor(&self, f: &FiniteFunction, a: &FamObject, b: &FamObject) -> Result<FamArrow> {
        let dom = self.tensor(&self.pullback(f, a)?, &self.pullback(f, b)?)?;
        let cod = self.pullback(f, &self.tensor(a, b)?)?;
        Ok(build(&dom, &cod, |_, p| p))
    }

    fn pullback_compose(&self, f: &FiniteFunction, g: &FiniteFunction, x: &FamObject) -> Result<FamArrow> {
        let dom = self.pullback(f, &self.pullback(g, x)?)?;
        let cod = self.pullback(&f.then(g)?, x)?;
        Ok(build(&dom, &cod, |_, p| p))
    }

    fn pullback_identity(&self, x: &FamObject) -> Result<FamArrow> {
        let dom = self.pullback(&FiniteFunction::identity(&x.base), x)?;
        Ok(build(&dom, x, |_, p| p))
    }

    fn pushforward_compose(&self, f: &FiniteFunction, g: &FiniteFunction, x: &FamObject) -> Result<FamArrow> {
        let fg = f.then(g)?;
        let dom = self.pushforward(&fg, x)?;
        let inner = self.pushforward(f, x)?;
        let cod = self.pushforward(g, &inner)?;
        Ok(build(&dom, &cod, |k, p| {
            let (fib, outer) = Fam::fibre_sum(&fg, x, k);
            let (t, a) = outer.case(p);
            let i = fib[t];
            let j = f.apply(i);
            let (ffib, fsum) = Fam::fibre_sum(f, x, j);
            let (gfib, gsum) = Fam::fibre_sum(g, &inner, k);
            let s = ffib.iter().position(|&e| e == i).expect("i lies in the fibre of f(i)");
            let r = gfib.iter().position(|&e| e == j).expect("f(i) lies in the fibre of k");
            gsum.inj(r, fsum.inj(s, a))
        }))
    }

    fn pushforward_identity(&self, x: &FamObject) -> Result<FamArrow> {
        let dom = self.pushforward(&FiniteFunction::identity(&x.base), x)?;
        Ok(build(&dom, x, |_, p| p))
    }
}

impl Fam {
    /// Checks that `m` is a well-formed arrow of this instance.
    pub fn validate(&self, m: &Arrow<Fam>) -> Result<()> {
        same_base(&m.dom, &m.cod)?;
        if m.map.len() != m.dom.family.len() {
            return Err(Error::invalid("family arrow", "one component per index"));
        }
        for (i, f) in m.map.iter().enumerate() {
            if f.dom() != &m.dom.family[i] || f.cod() != &m.cod.family[i] {
                return Err(Error::invalid("family arrow", format!("component {i} has the wrong endpoints")));
            }
        }
        Ok(())
    }
}
