use petgraph::unionfind::UnionFind;

/// Union-find over `0..n` that tracks its component count and reports
/// canonical component labels.
#[derive(Clone)]
pub(crate) struct Components {
    inner: UnionFind<usize>,
    len: usize,
    count: usize,
}

impl Components {
    pub(crate) fn new(len: usize) -> Self {
        Components { inner: UnionFind::new(len), len, count: len }
    }

    /// Adds singleton components until there are `len` elements.
    pub(crate) fn grow(&mut self, len: usize) {
        while self.len < len {
            self.inner.new_set();
            self.len += 1;
            self.count += 1;
        }
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let merged = self.inner.union(a, b);
        if merged {
            self.count -= 1;
        }
        merged
    }

    pub(crate) fn same(&self, a: usize, b: usize) -> bool {
        self.inner.equiv(a, b)
    }

    /// Component id per element, numbered by first appearance.
    pub(crate) fn labels(&self) -> Vec<usize> {
        let reps = self.inner.clone().into_labeling();
        let mut renumber = vec![usize::MAX; self.len];
        let mut next = 0;
        reps.iter()
            .map(|&r| {
                if renumber[r] == usize::MAX {
                    renumber[r] = next;
                    next += 1;
                }
                renumber[r]
            })
            .collect()
    }

    pub(crate) fn count(&self) -> usize {
        self.count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_labels() {
        let mut c = Components::new(4);
        assert!(c.union(0, 2));
        assert!(!c.union(2, 0));
        c.grow(5);
        c.union(4, 1);
        assert_eq!(c.count(), 3);
        assert_eq!(c.labels(), vec![0, 1, 0, 2, 1]);
        assert!(c.same(1, 4));
    }
}
