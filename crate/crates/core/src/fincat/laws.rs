use std::fmt::Debug;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::category::FiniteCategory;
use super::finset::FinSet;
use crate::error::{guard, Result};

/// Witnesses kept per report; the violation count is always exact.
pub const MAX_WITNESSES: usize = 16;

/// One failed law instance, with enough JSON to replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub witness: Value,
}

/// Outcome of an exhaustive law check.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub name: String,
    pub checked: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

impl LawReport {
    pub fn new(name: impl Into<String>) -> Self {
        LawReport { name: name.into(), ..LawReport::default() }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    /// Records one check; `witness` is only built on failure.
    pub fn check(&mut self, ok: bool, law: &str, witness: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.fail(law, witness());
        }
    }

    pub fn fail(&mut self, law: &str, witness: Value) {
        self.violation_count += 1;
        if self.violations.len() < MAX_WITNESSES {
            self.violations.push(Violation { law: law.to_string(), witness });
        }
    }

    pub fn absorb(&mut self, other: LawReport) {
        self.checked += other.checked;
        self.violation_count += other.violation_count;
        for v in other.violations {
            if self.violations.len() < MAX_WITNESSES {
                self.violations.push(v);
            }
        }
    }
}

/// A category whose objects up to a size bound, and all morphisms between
/// them, can be listed.
pub trait EnumerableCategory {
    type Obj: Clone + Debug + Serialize;
    type Mor: Clone + PartialEq + Debug + Serialize;

    fn objects(&self, size_bound: usize) -> Vec<Self::Obj>;
    fn hom(&self, a: &Self::Obj, b: &Self::Obj, ceiling: usize) -> Result<Vec<Self::Mor>>;
    fn identity(&self, a: &Self::Obj) -> Self::Mor;
    /// `f` followed by `g`.
    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
}

/// The objects of a [`FiniteCategory`] are the representative sets `0..=bound`.
impl<K: FiniteCategory> EnumerableCategory for K {
    type Obj = FinSet;
    type Mor = K::Mor;

    fn objects(&self, size_bound: usize) -> Vec<FinSet> {
        FinSet::up_to(size_bound)
    }

    fn hom(&self, a: &FinSet, b: &FinSet, ceiling: usize) -> Result<Vec<K::Mor>> {
        FiniteCategory::hom(self, a, b, ceiling)
    }

    fn identity(&self, a: &FinSet) -> K::Mor {
        FiniteCategory::identity(self, a)
    }

    fn compose(&self, f: &K::Mor, g: &K::Mor) -> Result<K::Mor> {
        FiniteCategory::compose(self, f, g)
    }
}

/// Checks unit and associativity laws on every composable triple between
/// objects of size at most `size_bound`.
///
/// `ceiling` bounds the total number of morphisms listed; exceeding it is an
/// error rather than a silent truncation. A composition that errors on a
/// composable pair is reported as a violation.
pub fn check_category_laws<C: EnumerableCategory>(
    category: &C,
    name: &str,
    size_bound: usize,
    ceiling: usize,
) -> Result<LawReport> {
    let objects = category.objects(size_bound);
    let n = objects.len();
    let mut homs: Vec<Vec<Vec<C::Mor>>> = Vec::with_capacity(n);
    let mut total: u128 = 0;
    for a in &objects {
        let mut row = Vec::with_capacity(n);
        for b in &objects {
            let h = category.hom(a, b, ceiling)?;
            total += h.len() as u128;
            guard(total, ceiling)?;
            row.push(h);
        }
        homs.push(row);
    }

    let mut report = LawReport::new(name);
    let ids: Vec<C::Mor> = objects.iter().map(|a| category.identity(a)).collect();
    for a in 0..n {
        for b in 0..n {
            for f in &homs[a][b] {
                let left = category.compose(&ids[a], f);
                report.check(left.as_ref() == Ok(f), "left identity", || json!({"object": objects[a], "morphism": f}));
                let right = category.compose(f, &ids[b]);
                report.check(
                    right.as_ref() == Ok(f),
                    "right identity",
                    || json!({"object": objects[b], "morphism": f}),
                );
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                // f;g for every f: a→b, g: b→c
                let fg: Vec<Vec<Option<C::Mor>>> = homs[a][b]
                    .iter()
                    .map(|f| homs[b][c].iter().map(|g| category.compose(f, g).ok()).collect())
                    .collect();
                for d in 0..n {
                    let gh: Vec<Vec<Option<C::Mor>>> = homs[b][c]
                        .iter()
                        .map(|g| homs[c][d].iter().map(|h| category.compose(g, h).ok()).collect())
                        .collect();
                    for (fi, f) in homs[a][b].iter().enumerate() {
                        for (gi, g) in homs[b][c].iter().enumerate() {
                            for (hi, h) in homs[c][d].iter().enumerate() {
                                let left = fg[fi][gi].as_ref().and_then(|x| category.compose(x, h).ok());
                                let right = gh[gi][hi].as_ref().and_then(|x| category.compose(f, x).ok());
                                report.check(
                                    left.is_some() && left == right,
                                    "associativity",
                                    || json!({"f": f, "g": g, "h": h, "(f;g);h": left, "f;(g;h)": right}),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fincat::{FinSetCat, FinStochCat, FiniteFunction, Morphism};

    #[test]
    fn finset_laws() {
        let r = check_category_laws(&FinSetCat, "finset", 2, 1_000_000).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.checked > 0);
    }

    #[test]
    fn finstoch_laws() {
        let r = check_category_laws(&FinStochCat::default(), "finstoch", 2, 1_000_000).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
    }

    /// Composition that forgets the second map whenever it is not the identity.
    struct Corrupted;

    impl EnumerableCategory for Corrupted {
        type Obj = FinSet;
        type Mor = FiniteFunction;
        fn objects(&self, b: usize) -> Vec<FinSet> {
            FinSet::up_to(b)
        }
        fn hom(&self, a: &FinSet, b: &FinSet, c: usize) -> Result<Vec<FiniteFunction>> {
            FiniteFunction::enumerate(a, b, c)
        }
        fn identity(&self, a: &FinSet) -> FiniteFunction {
            FiniteFunction::identity(a)
        }
        fn compose(&self, f: &FiniteFunction, g: &FiniteFunction) -> Result<FiniteFunction> {
            let honest = f.then(g)?;
            if f.dom().size() == 2 && g.cod().size() == 2 {
                FiniteFunction::constant(f.dom(), g.cod(), 0)
            } else {
                Ok(honest)
            }
        }
    }

    #[test]
    fn corrupted_table_is_caught() {
        let r = check_category_laws(&Corrupted, "corrupted", 2, 1_000_000).unwrap();
        assert!(!r.passed());
        assert!(!r.violations.is_empty());
        assert!(r.violations[0].witness.is_object());
    }

    #[test]
    fn ceiling_guard() {
        let e = check_category_laws(&FinSetCat, "finset", 3, 50).unwrap_err();
        assert!(matches!(e, Error::Ceiling { .. }));
    }
}
