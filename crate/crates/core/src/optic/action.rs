use serde_json::json;

use crate::error::Result;
use crate::fincat::{FinSet, FinSetCat, FinStochCat, FiniteCategory, FiniteFunction, LawReport, ProductWitness};

/// The self-action of a finite category on itself by its monoidal product.
///
/// The left action is `M • Y = M × Y` and the right action is
/// `Y' • M = Y' × M`, both on row-major carriers. The acting category has the
/// singleton as unit and the empty set as initial object. Coherence maps are
/// concrete bijections; with row-major encoding they happen to be identity
/// tables, but they are always built from the pairing witnesses and checked.
#[derive(Clone, Copy, Debug)]
pub struct ActionInstance<K> {
    pub category: K,
}

impl ActionInstance<FinSetCat> {
    /// The cartesian action of finite sets on themselves.
    pub fn cartesian() -> Self {
        ActionInstance { category: FinSetCat }
    }
}

impl ActionInstance<FinStochCat> {
    /// Finite stochastic kernels acting by the (non-cartesian) product.
    pub fn stochastic(denominators: Vec<u32>) -> Self {
        ActionInstance { category: FinStochCat::with_grid(denominators) }
    }
}

impl<K: FiniteCategory> ActionInstance<K> {
    pub fn new(category: K) -> Self {
        ActionInstance { category }
    }

    pub fn unit(&self) -> FinSet {
        FinSet::new(1)
    }

    pub fn initial(&self) -> FinSet {
        FinSet::new(0)
    }

    pub fn tensor(&self, m: &FinSet, n: &FinSet) -> FinSet {
        ProductWitness::new(m, n).carrier
    }

    /// `M • Y`.
    pub fn act(&self, m: &FinSet, y: &FinSet) -> ProductWitness {
        ProductWitness::new(m, y)
    }

    /// `Y' • M`.
    pub fn act_right(&self, y: &FinSet, m: &FinSet) -> ProductWitness {
        ProductWitness::new(y, m)
    }

    /// `I • Y → Y`.
    pub fn left_unitor(&self, y: &FinSet) -> FiniteFunction {
        let w = self.act(&self.unit(), y);
        FiniteFunction::from_fn(w.carrier.clone(), y.clone(), |k| w.unpair(k).1).expect("unitor")
    }

    /// `Y' • I → Y'`.
    pub fn right_unitor(&self, y: &FinSet) -> FiniteFunction {
        let w = self.act_right(y, &self.unit());
        FiniteFunction::from_fn(w.carrier.clone(), y.clone(), |k| w.unpair(k).0).expect("unitor")
    }

    /// `M • (N • Y) → (M ⊗ N) • Y`.
    pub fn multiplicator(&self, m: &FinSet, n: &FinSet, y: &FinSet) -> FiniteFunction {
        let inner = self.act(n, y);
        let outer = self.act(m, &inner.carrier);
        let mn = ProductWitness::new(m, n);
        let target = self.act(&mn.carrier, y);
        FiniteFunction::from_fn(outer.carrier.clone(), target.carrier.clone(), |k| {
            let (a, rest) = outer.unpair(k);
            let (b, c) = inner.unpair(rest);
            target.pair(mn.pair(a, b), c)
        })
        .expect("multiplicator")
    }

    /// `(Y' • M) • N → Y' • (M ⊗ N)`.
    pub fn right_multiplicator(&self, y: &FinSet, m: &FinSet, n: &FinSet) -> FiniteFunction {
        let inner = self.act_right(y, m);
        let outer = self.act_right(&inner.carrier, n);
        let mn = ProductWitness::new(m, n);
        let target = self.act_right(y, &mn.carrier);
        FiniteFunction::from_fn(outer.carrier.clone(), target.carrier.clone(), |k| {
            let (rest, b) = outer.unpair(k);
            let (c, a) = inner.unpair(rest);
            target.pair(c, mn.pair(a, b))
        })
        .expect("multiplicator")
    }

    /// Checks that the coherence maps are bijections and that both actions are
    /// functorial in each argument on all morphisms between sets of size at
    /// most `size_bound`.
    pub fn check_coherence(&self, size_bound: usize, ceiling: usize) -> Result<LawReport> {
        let k = &self.category;
        let mut report = LawReport::new(format!("{} action coherence", k.name()));
        let objs = FinSet::up_to(size_bound);
        for a in &objs {
            report.check(self.left_unitor(a).is_bijective(), "left unitor", || json!({"object": a}));
            report.check(self.right_unitor(a).is_bijective(), "right unitor", || json!({"object": a}));
            for b in &objs {
                for c in &objs {
                    report.check(
                        self.multiplicator(a, b, c).is_bijective(),
                        "multiplicator",
                        || json!({"objects": [a, b, c]}),
                    );
                    report.check(
                        self.right_multiplicator(a, b, c).is_bijective(),
                        "right multiplicator",
                        || json!({"objects": [a, b, c]}),
                    );
                }
            }
        }
        for a in &objs {
            for b in &objs {
                let fs = k.hom(a, b, ceiling)?;
                for c in &objs {
                    let gs = k.hom(b, c, ceiling)?;
                    for m in &objs {
                        let id = k.identity(m);
                        for f in &fs {
                            for g in &gs {
                                let fg = k.compose(f, g)?;
                                let lhs = k.product(&id, &fg);
                                let rhs = k.compose(&k.product(&id, f), &k.product(&id, g))?;
                                report.check(
                                    lhs == rhs,
                                    "left action functoriality",
                                    || json!({"m": m, "f": f, "g": g}),
                                );
                                let lhs = k.product(&fg, &id);
                                let rhs = k.compose(&k.product(f, &id), &k.product(g, &id))?;
                                report.check(
                                    lhs == rhs,
                                    "right action functoriality",
                                    || json!({"m": m, "f": f, "g": g}),
                                );
                            }
                        }
                    }
                }
            }
        }
        Ok(report)
    }
}
