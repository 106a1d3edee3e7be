//! Heavy-walk probabilities h[v][i].
//!
//! h[v][i] is the probability that a uniform random walk of i steps from v
//! visits only heavy vertices; light vertices are pinned to 0 at every level.
//! These values quantify the heavy-edge bias of the sampler and feed the
//! exact sampler's correction distribution.

use crate::error::{Error, Result};
use crate::graph::{EdgeClassification, Graph};
use crate::numeric::Scalar;


/// Dense (vertex, level) table, levels 1..=ell.
#[derive(Debug, Clone)]
pub struct HTable<S> {
    ell: usize,
    n: usize,
    values: Vec<S>,
}

impl<S: Scalar> HTable<S> {
    /// Iterative computation in `ell` phases: level 1 is d_H(v)/d(v) for
    /// heavy v, level i averages level i-1 over the heavy neighbors.
    /// A heavy vertex with no heavy neighbors gets 0 at levels >= 2
    /// (empty sum).
    pub fn compute(g: &Graph, cls: &EdgeClassification, ell: usize) -> Self {
        assert!(ell >= 1, "ell must be >= 1");
        let n = g.n();
        let mut values = vec![S::zero(); n * ell];
        for v in 0..n {
            if cls.is_heavy(v) {
                values[v * ell] = S::ratio(cls.d_h(v) as u64, g.degree(v) as u64);
            }
        }
        for i in 2..=ell {
            for v in 0..n {
                if !cls.is_heavy(v) {
                    continue;
                }
                let mut sum = S::zero();
                for &w in cls.heavy_neighbors(v) {
                    sum = sum + values[w * ell + (i - 2)].clone();
                }
                // Equals h[v][1] * sum / d_H(v) when d_H(v) > 0.
                values[v * ell + (i - 1)] = sum / S::ratio(g.degree(v) as u64, 1);
            }
        }
        Self { ell, n, values }
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// h[v][i], i in 1..=ell.
    pub fn get(&self, v: usize, i: usize) -> &S {
        assert!(i >= 1 && i <= self.ell, "level {i} outside 1..={}", self.ell);
        &self.values[v * self.ell + (i - 1)]
    }

    /// (vertex, level, value) rows, level-major per vertex.
    pub fn rows(&self) -> impl Iterator<Item = (usize, usize, &S)> + '_ {
        (0..self.n).flat_map(move |v| (1..=self.ell).map(move |i| (v, i, self.get(v, i))))
    }
}

const WALK_BUDGET: u64 = 50_000_000;

/// Independent oracle for `HTable::compute`: exhaustively enumerates all
/// i-step neighbor sequences from `v` and adds up the all-heavy ones.
/// Deliberately unmemoized so it shares no structure with the DP.
pub fn h_walk_oracle<S: Scalar>(
    g: &Graph,
    cls: &EdgeClassification,
    v: usize,
    i: usize,
) -> Result<S> {
    if cls.is_light(v) {
        return Ok(S::zero());
    }
    let mut budget = WALK_BUDGET;
    walk_prob(g, cls, v, i, &mut budget)
}

fn walk_prob<S: Scalar>(
    g: &Graph,
    cls: &EdgeClassification,
    v: usize,
    steps: usize,
    budget: &mut u64,
) -> Result<S> {
    if steps == 0 {
        return Ok(S::one());
    }
    let d = g.degree(v);
    if d == 0 {
        return Ok(S::zero());
    }
    let mut sum = S::zero();
    for &w in g.neighbors(v) {
        if *budget == 0 {
            return Err(Error::ResourceGuard(format!(
                "walk enumeration exceeded {WALK_BUDGET} visits"
            )));
        }
        *budget -= 1;
        if cls.is_heavy(w) {
            sum = sum + walk_prob(g, cls, w, steps - 1, budget)?;
        }
    }
    Ok(sum / S::ratio(d as u64, 1))
}
