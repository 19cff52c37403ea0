use serde::{Deserialize, Serialize};

use super::IndexedFamily;
use crate::error::{guard, Result};
use crate::fincat::{pow, tuples};

/// A count of natural transformations that is only known to be natural with
/// respect to the probe subcategory of sets of size at most `probe_bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialCount {
    pub count: u128,
    pub probe_bound: usize,
    pub probe_relative: bool,
}

/// `F(Y) = Σ_i X_i × Y^{X'_i}` evaluated on sets `0..n`.
struct Polynomial {
    parts: Vec<(usize, usize)>,
}

impl Polynomial {
    fn of(f: &IndexedFamily) -> Self {
        Polynomial { parts: f.components().iter().map(|b| (b.view.size(), b.update.size())).collect() }
    }

    fn size(&self, s: usize) -> usize {
        self.parts.iter().map(|&(x, e)| x * pow(s as u128, e) as usize).sum()
    }

    /// The action of `h: s → t` as a table `F(s) → F(t)`.
    fn map(&self, h: &[usize], s: usize, t: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.size(s));
        let (mut off_s, mut off_t) = (0, 0);
        for &(x, e) in &self.parts {
            let (ws, wt) = (pow(s as u128, e) as usize, pow(t as u128, e) as usize);
            for a in 0..x {
                for code in 0..ws {
                    // φ little-endian in base s; h ∘ φ re-encoded in base t
                    let mut c = code;
                    let mut image = 0;
                    let mut scale = 1;
                    for _ in 0..e {
                        image += h[c % s] * scale;
                        c /= s;
                        scale *= t;
                    }
                    out.push(off_t + a * wt + image);
                }
            }
            off_s += x * ws;
            off_t += x * wt;
        }
        debug_assert_eq!(off_s, out.len());
        out
    }
}

struct Search {
    offsets: Vec<usize>,
    set_of: Vec<usize>,
    g_sizes: Vec<usize>,
    /// For each source size, `(target size, F-map, G-map)` for every function.
    arrows: Vec<Vec<(usize, Vec<usize>, Vec<usize>)>>,
    value: Vec<Option<usize>>,
    trail: Vec<usize>,
}

impl Search {
    fn assign(&mut self, var: usize, val: usize) -> bool {
        let mut stack = vec![(var, val)];
        while let Some((v, x)) = stack.pop() {
            match self.value[v] {
                Some(w) if w == x => continue,
                Some(_) => return false,
                None => {}
            }
            self.value[v] = Some(x);
            self.trail.push(v);
            let s = self.set_of[v];
            let e = v - self.offsets[s];
            for (t, fmap, gmap) in &self.arrows[s] {
                stack.push((self.offsets[*t] + fmap[e], gmap[x]));
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("trail");
            self.value[v] = None;
        }
    }

    fn count(&mut self, from: usize) -> u128 {
        let Some(var) = (from..self.value.len()).find(|&v| self.value[v].is_none()) else {
            return 1;
        };
        let mut total: u128 = 0;
        for x in 0..self.g_sizes[self.set_of[var]] {
            let mark = self.trail.len();
            if self.assign(var, x) {
                total = total.saturating_add(self.count(var + 1));
            }
            self.undo(mark);
        }
        total
    }
}

/// Counts families `α_Y: F(Y) → G(Y)` natural for every function between
/// sets of size at most `probe_bound`, where `F(Y) = Σ_i X_i × Y^{X'_i}` is
/// built from `src` and `G` likewise from `tgt`.
///
/// `ceiling` bounds the number of naturality equations generated.
pub fn count_polynomial_nat(
    src: &IndexedFamily,
    tgt: &IndexedFamily,
    probe_bound: usize,
    ceiling: usize,
) -> Result<PolynomialCount> {
    let (f, g) = (Polynomial::of(src), Polynomial::of(tgt));
    let sets: Vec<usize> = (0..=probe_bound).collect();
    let mut equations: u128 = 0;
    for &s in &sets {
        for &t in &sets {
            equations = equations.saturating_add(pow(t as u128, s).saturating_mul(f.size(s) as u128));
        }
    }
    guard(equations, ceiling)?;

    let mut offsets = Vec::new();
    let mut set_of = Vec::new();
    for &s in &sets {
        offsets.push(set_of.len());
        set_of.extend(std::iter::repeat_n(s, f.size(s)));
    }
    let arrows = sets
        .iter()
        .map(|&s| {
            let mut out = Vec::new();
            for &t in &sets {
                for h in tuples(s, t) {
                    out.push((t, f.map(&h, s, t), g.map(&h, s, t)));
                }
            }
            out
        })
        .collect();
    let mut search = Search {
        offsets,
        g_sizes: sets.iter().map(|&s| g.size(s)).collect(),
        value: vec![None; set_of.len()],
        set_of,
        arrows,
        trail: Vec::new(),
    };
    Ok(PolynomialCount { count: search.count(0), probe_bound, probe_relative: true })
}
