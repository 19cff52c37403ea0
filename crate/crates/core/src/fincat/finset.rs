use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};

/// A finite set `{0, .., size-1}`, optionally with display labels.
///
/// Equality, ordering and hashing look at `size` only; labels never take part
/// in structural comparisons.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "RawFinSet")]
pub struct FinSet {
    size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct RawFinSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl TryFrom<RawFinSet> for FinSet {
    type Error = Error;
    fn try_from(raw: RawFinSet) -> Result<Self> {
        match raw.labels {
            Some(labels) => FinSet::labelled(labels).and_then(|s| {
                if s.size == raw.size {
                    Ok(s)
                } else {
                    Err(Error::invalid("finite set", "label count differs from size"))
                }
            }),
            None => Ok(FinSet::new(raw.size)),
        }
    }
}

impl FinSet {
    pub fn new(size: usize) -> Self {
        FinSet { size, labels: None }
    }

    pub fn labelled(labels: Vec<String>) -> Result<Self> {
        let distinct: HashSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::invalid("finite set", "labels are not distinct"));
        }
        Ok(FinSet { size: labels.len(), labels: Some(labels) })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of element `i`.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// The representative sets of sizes `0..=bound`.
    pub fn up_to(bound: usize) -> Vec<FinSet> {
        (0..=bound).map(FinSet::new).collect()
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
    }
}

impl Eq for FinSet {}

impl Hash for FinSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.size.hash(state);
    }
}

impl PartialOrd for FinSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FinSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size.cmp(&other.size)
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.size)
    }
}

/// Anything with a domain and codomain finite set.
pub trait Morphism {
    fn dom(&self) -> &FinSet;
    fn cod(&self) -> &FinSet;
}

/// A function between finite sets, stored as its lookup table.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFunction")]
pub struct FiniteFunction {
    dom: FinSet,
    cod: FinSet,
    table: Vec<usize>,
}

#[derive(Deserialize)]
struct RawFunction {
    dom: FinSet,
    cod: FinSet,
    table: Vec<usize>,
}

impl TryFrom<RawFunction> for FiniteFunction {
    type Error = Error;
    fn try_from(raw: RawFunction) -> Result<Self> {
        FiniteFunction::new(raw.dom, raw.cod, raw.table)
    }
}

impl FiniteFunction {
    pub fn new(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size() {
            return Err(Error::invalid(
                "function",
                format!("table has {} entries for a domain of size {}", table.len(), dom.size()),
            ));
        }
        if let Some(bad) = table.iter().find(|&&v| v >= cod.size()) {
            return Err(Error::invalid("function", format!("entry {bad} outside codomain of size {}", cod.size())));
        }
        Ok(FiniteFunction { dom, cod, table })
    }

    /// Builds a function from a closure; the closure must land in `cod`.
    pub fn from_fn(dom: FinSet, cod: FinSet, f: impl Fn(usize) -> usize) -> Result<Self> {
        let table = dom.elements().map(f).collect();
        FiniteFunction::new(dom, cod, table)
    }

    pub fn identity(x: &FinSet) -> Self {
        FiniteFunction { dom: x.clone(), cod: x.clone(), table: x.elements().collect() }
    }

    /// The unique map out of the empty set.
    pub fn empty(cod: &FinSet) -> Self {
        FiniteFunction { dom: FinSet::new(0), cod: cod.clone(), table: Vec::new() }
    }

    pub fn constant(dom: &FinSet, cod: &FinSet, value: usize) -> Result<Self> {
        FiniteFunction::new(dom.clone(), cod.clone(), vec![value; dom.size()])
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &FiniteFunction) -> Result<FiniteFunction> {
        compose_fn(self, g)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        for &v in &self.table {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.size() == self.cod.size() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<FiniteFunction> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.cod.size()];
        for (i, &v) in self.table.iter().enumerate() {
            table[v] = i;
        }
        Some(FiniteFunction { dom: self.cod.clone(), cod: self.dom.clone(), table })
    }

    /// Elements of the domain sent to `y`, ascending.
    pub fn fibre(&self, y: usize) -> Vec<usize> {
        self.table.iter().enumerate().filter(|&(_, &v)| v == y).map(|(i, _)| i).collect()
    }

    /// Number of functions `dom → cod`.
    pub fn count(dom: &FinSet, cod: &FinSet) -> u128 {
        pow(cod.size() as u128, dom.size())
    }

    /// All functions `dom → cod`, in lexicographic order of their tables.
    pub fn enumerate(dom: &FinSet, cod: &FinSet, ceiling: usize) -> Result<Vec<FiniteFunction>> {
        guard(FiniteFunction::count(dom, cod), ceiling)?;
        let tables = tuples(dom.size(), cod.size());
        Ok(tables.into_iter().map(|table| FiniteFunction { dom: dom.clone(), cod: cod.clone(), table }).collect())
    }
}

impl Morphism for FiniteFunction {
    fn dom(&self) -> &FinSet {
        &self.dom
    }
    fn cod(&self) -> &FinSet {
        &self.cod
    }
}

impl fmt::Debug for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}->{:?}{:?}", self.dom, self.cod, self.table)
    }
}

/// `g ∘ f`: apply `f` first.
pub fn compose_fn(f: &FiniteFunction, g: &FiniteFunction) -> Result<FiniteFunction> {
    if f.cod != g.dom {
        return Err(Error::mismatch(format!(
            "cannot compose {:?} with {:?}: codomain {:?} is not domain {:?}",
            f, g, f.cod, g.dom
        )));
    }
    Ok(FiniteFunction { dom: f.dom.clone(), cod: g.cod.clone(), table: f.table.iter().map(|&i| g.table[i]).collect() })
}

/// Saturating integer power.
pub(crate) fn pow(base: u128, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base))
}

/// All tuples of length `len` over `0..radix`, lexicographic.
pub(crate) fn tuples(len: usize, radix: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * radix);
        for prefix in &out {
            for v in 0..radix {
                let mut t = prefix.clone();
                t.push(v);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Cartesian product of option lists, lexicographic in the first list.
pub(crate) fn cartesian<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::with_capacity(choices.len())];
    for options in choices {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for o in options {
                let mut t = prefix.clone();
                t.push(o.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(dom: usize, cod: usize, table: &[usize]) -> FiniteFunction {
        FiniteFunction::new(FinSet::new(dom), FinSet::new(cod), table.to_vec()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let swap = f(2, 2, &[1, 0]);
        assert_eq!(compose_fn(&swap, &swap).unwrap(), FiniteFunction::identity(&FinSet::new(2)));
        let collapse = f(2, 1, &[0, 0]);
        let pick = f(1, 3, &[2]);
        assert_eq!(compose_fn(&collapse, &pick).unwrap().table(), &[2, 2]);
        let id = FiniteFunction::identity(&FinSet::new(2));
        assert_eq!(compose_fn(&id, &collapse).unwrap(), collapse);
    }

    #[test]
    fn compose_mismatch() {
        let a = f(2, 1, &[0, 0]);
        assert!(matches!(compose_fn(&a, &a), Err(Error::Mismatch(_))));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteFunction::new(FinSet::new(2), FinSet::new(1), vec![0]).is_err());
        assert!(FiniteFunction::new(FinSet::new(1), FinSet::new(1), vec![1]).is_err());
        assert!(FinSet::labelled(vec!["a".into(), "a".into()]).is_err());
    }

    #[test]
    fn labels_do_not_affect_equality() {
        let a = FinSet::labelled(vec!["x".into(), "y".into()]).unwrap();
        assert_eq!(a, FinSet::new(2));
        assert_eq!(a.label(1), "y");
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"size":2,"labels":["x","y"]}"#);
        let back: FinSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back.labels().unwrap(), ["x", "y"]);
        assert!(serde_json::from_str::<FinSet>(r#"{"size":3,"labels":["x"]}"#).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let all = FiniteFunction::enumerate(&FinSet::new(3), &FinSet::new(2), 100).unwrap();
        assert_eq!(all.len(), 8);
        let empty = FiniteFunction::enumerate(&FinSet::new(0), &FinSet::new(0), 100).unwrap();
        assert_eq!(empty.len(), 1);
        assert!(FiniteFunction::enumerate(&FinSet::new(2), &FinSet::new(0), 100).unwrap().is_empty());
        assert!(FiniteFunction::enumerate(&FinSet::new(5), &FinSet::new(5), 100).is_err());
    }

    #[test]
    fn inverse_of_bijection() {
        let p = f(3, 3, &[2, 0, 1]);
        let q = p.inverse().unwrap();
        assert_eq!(compose_fn(&p, &q).unwrap(), FiniteFunction::identity(&FinSet::new(3)));
        assert!(f(2, 2, &[0, 0]).inverse().is_none());
    }

    #[test]
    fn function_json_is_validated() {
        let good = r#"{"dom":{"size":2},"cod":{"size":3},"table":[2,0]}"#;
        let parsed: FiniteFunction = serde_json::from_str(good).unwrap();
        assert_eq!(parsed.table(), &[2, 0]);
        assert!(serde_json::from_str::<FiniteFunction>(r#"{"dom":{"size":2},"cod":{"size":1},"table":[2,0]}"#).is_err());
    }
}
