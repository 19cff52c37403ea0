use serde::{Deserialize, Serialize};

use super::finset::{FinSet, FiniteFunction};
use crate::error::Result;

/// Row-major product: `pair(i, j) = i·|right| + j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductWitness {
    pub left: FinSet,
    pub right: FinSet,
    pub carrier: FinSet,
}

impl ProductWitness {
    pub fn new(left: &FinSet, right: &FinSet) -> Self {
        ProductWitness { left: left.clone(), right: right.clone(), carrier: FinSet::new(left.size() * right.size()) }
    }

    pub fn pair(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.left.size() && j < self.right.size());
        i * self.right.size() + j
    }

    pub fn unpair(&self, k: usize) -> (usize, usize) {
        debug_assert!(k < self.carrier.size());
        (k / self.right.size(), k % self.right.size())
    }

    pub fn proj_left(&self) -> FiniteFunction {
        FiniteFunction::from_fn(self.carrier.clone(), self.left.clone(), |k| self.unpair(k).0)
            .expect("projection lands in left factor")
    }

    pub fn proj_right(&self) -> FiniteFunction {
        FiniteFunction::from_fn(self.carrier.clone(), self.right.clone(), |k| self.unpair(k).1)
            .expect("projection lands in right factor")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tag {
    Left,
    Right,
}

/// Binary coproduct: `injl(i) = i`, `injr(j) = |left| + j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoproductWitness {
    pub left: FinSet,
    pub right: FinSet,
    pub carrier: FinSet,
}

impl CoproductWitness {
    pub fn new(left: &FinSet, right: &FinSet) -> Self {
        CoproductWitness { left: left.clone(), right: right.clone(), carrier: FinSet::new(left.size() + right.size()) }
    }

    pub fn injl(&self, i: usize) -> usize {
        debug_assert!(i < self.left.size());
        i
    }

    pub fn injr(&self, j: usize) -> usize {
        debug_assert!(j < self.right.size());
        self.left.size() + j
    }

    pub fn case(&self, k: usize) -> (Tag, usize) {
        if k < self.left.size() {
            (Tag::Left, k)
        } else {
            (Tag::Right, k - self.left.size())
        }
    }
}

/// An n-ary coproduct built as the left fold `((S_0 + S_1) + S_2) + ...`.
///
/// Folding binary witnesses in ascending order puts summand `j` at offset
/// `Σ_{j' < j} |S_j'|`, which is what `inj` and `case` compute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coproduct {
    offsets: Vec<usize>,
    carrier: FinSet,
}

impl Coproduct {
    pub fn new(summands: &[FinSet]) -> Self {
        let mut offsets = Vec::with_capacity(summands.len());
        let mut acc = FinSet::new(0);
        for s in summands {
            let w = CoproductWitness::new(&acc, s);
            offsets.push(if s.is_empty() { w.carrier.size() } else { w.injr(0) });
            acc = w.carrier;
        }
        Coproduct { offsets, carrier: acc }
    }

    pub fn from_sizes(sizes: impl IntoIterator<Item = usize>) -> Self {
        let sets: Vec<FinSet> = sizes.into_iter().map(FinSet::new).collect();
        Coproduct::new(&sets)
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn summand_size(&self, j: usize) -> usize {
        let end = self.offsets.get(j + 1).copied().unwrap_or(self.carrier.size());
        end - self.offsets[j]
    }

    pub fn offset(&self, j: usize) -> usize {
        self.offsets[j]
    }

    pub fn inj(&self, j: usize, x: usize) -> usize {
        debug_assert!(x < self.summand_size(j));
        self.offsets[j] + x
    }

    /// Summand index and local element of `k`.
    pub fn case(&self, k: usize) -> (usize, usize) {
        debug_assert!(k < self.carrier.size());
        let j = (0..self.len())
            .find(|&j| k >= self.offsets[j] && k - self.offsets[j] < self.summand_size(j))
            .expect("k lies in some summand");
        (j, k - self.offsets[j])
    }
}

/// The distributivity bijection `x×(y+z) ≅ x×y + x×z` and its inverse.
pub fn distribute(x: &FinSet, y: &FinSet, z: &FinSet) -> Result<(FiniteFunction, FiniteFunction)> {
    let yz = CoproductWitness::new(y, z);
    let lhs = ProductWitness::new(x, &yz.carrier);
    let xy = ProductWitness::new(x, y);
    let xz = ProductWitness::new(x, z);
    let rhs = CoproductWitness::new(&xy.carrier, &xz.carrier);
    let forward = FiniteFunction::from_fn(lhs.carrier.clone(), rhs.carrier.clone(), |k| {
        let (a, s) = lhs.unpair(k);
        match yz.case(s) {
            (Tag::Left, b) => rhs.injl(xy.pair(a, b)),
            (Tag::Right, c) => rhs.injr(xz.pair(a, c)),
        }
    })?;
    let backward = FiniteFunction::from_fn(rhs.carrier.clone(), lhs.carrier.clone(), |k| match rhs.case(k) {
        (Tag::Left, p) => {
            let (a, b) = xy.unpair(p);
            lhs.pair(a, yz.injl(b))
        }
        (Tag::Right, p) => {
            let (a, c) = xz.unpair(p);
            lhs.pair(a, yz.injr(c))
        }
    })?;
    Ok((forward, backward))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::compose_fn;

    #[test]
    fn product_inverts() {
        for l in 0..4 {
            for r in 0..4 {
                let w = ProductWitness::new(&FinSet::new(l), &FinSet::new(r));
                for i in 0..l {
                    for j in 0..r {
                        assert_eq!(w.unpair(w.pair(i, j)), (i, j));
                    }
                }
                for k in w.carrier.elements() {
                    let (i, j) = w.unpair(k);
                    assert_eq!(w.pair(i, j), k);
                }
            }
        }
    }

    #[test]
    fn coproduct_inverts() {
        for l in 0..4 {
            for r in 0..4 {
                let w = CoproductWitness::new(&FinSet::new(l), &FinSet::new(r));
                let mut hit = vec![0; l + r];
                for i in 0..l {
                    hit[w.injl(i)] += 1;
                    assert_eq!(w.case(w.injl(i)), (Tag::Left, i));
                }
                for j in 0..r {
                    hit[w.injr(j)] += 1;
                    assert_eq!(w.case(w.injr(j)), (Tag::Right, j));
                }
                assert!(hit.iter().all(|&h| h == 1));
            }
        }
    }

    #[test]
    fn nary_coproduct_matches_fold() {
        let c = Coproduct::from_sizes([2, 0, 3, 0, 1]);
        assert_eq!(c.carrier().size(), 6);
        let mut seen = Vec::new();
        for j in 0..c.len() {
            for x in 0..c.summand_size(j) {
                let k = c.inj(j, x);
                assert_eq!(c.case(k), (j, x));
                seen.push(k);
            }
        }
        assert_eq!(seen, (0..6).collect::<Vec<_>>());
        let empty = Coproduct::from_sizes([]);
        assert!(empty.is_empty());
        assert_eq!(empty.carrier().size(), 0);
    }

    #[test]
    fn distribute_examples() {
        // unit case: |x| = 1 is an identity relabelling
        let (f, _) = distribute(&FinSet::new(1), &FinSet::new(2), &FinSet::new(1)).unwrap();
        assert_eq!(f, FiniteFunction::identity(&FinSet::new(3)));
        // empty left summand
        let (f, g) = distribute(&FinSet::new(2), &FinSet::new(0), &FinSet::new(2)).unwrap();
        assert_eq!(f, FiniteFunction::identity(&FinSet::new(4)));
        assert_eq!(g, FiniteFunction::identity(&FinSet::new(4)));
        // |x|=2, |y|=1, |z|=2: six elements
        let (f, g) = distribute(&FinSet::new(2), &FinSet::new(1), &FinSet::new(2)).unwrap();
        assert_eq!(f.table(), &[0, 2, 3, 1, 4, 5]);
        assert_eq!(compose_fn(&f, &g).unwrap(), FiniteFunction::identity(&FinSet::new(6)));
        assert_eq!(compose_fn(&g, &f).unwrap(), FiniteFunction::identity(&FinSet::new(6)));
    }

    #[test]
    fn distribute_inverts_up_to_three() {
        for x in 0..=3 {
            for y in 0..=3 {
                for z in 0..=3 {
                    let (f, g) = distribute(&FinSet::new(x), &FinSet::new(y), &FinSet::new(z)).unwrap();
                    let n = FinSet::new(x * (y + z));
                    assert_eq!(compose_fn(&f, &g).unwrap(), FiniteFunction::identity(&n));
                    assert_eq!(compose_fn(&g, &f).unwrap(), FiniteFunction::identity(&n));
                }
            }
        }
    }
}
