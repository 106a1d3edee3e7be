//! Exactly uniform edge sampling.
//!
//! Mixes the approximate sampler (weight 1 - delta) with an explicit
//! correction distribution (weight delta) whose per-edge weights are chosen
//! so the marginal lands exactly on 1/(2m) per directed edge. The correction
//! table costs O(m log n) to build, so it is materialized lazily, only when
//! the delta-branch actually fires, and then memoized.

use crate::approx::{sample_edge, EdgeSample, SamplerConfig};
use crate::error::{Error, Result};
use crate::graph::{classify, EdgeClassification, Graph};
use crate::htable::HTable;
use crate::numeric::Scalar;
use crate::oracle::QueryOracle;

use rand::Rng;
use std::sync::OnceLock;

/// Normalized correction weights per directed edge, with prefix sums for
/// inverse-CDF sampling.
#[derive(Debug, Clone)]
pub struct CorrectionDistribution<S> {
    weights: Vec<S>,
    cumulative: Vec<f64>,
}

impl<S: Scalar> CorrectionDistribution<S> {
    /// Weight per directed edge, flat directed-id order.
    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    /// Draws a directed-edge id by binary search on the prefix sums.
    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        let total = *self.cumulative.last().expect("nonempty distribution");
        let x = rng.random::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= x).min(self.weights.len() - 1)
    }
}

/// Builds the correction weights
/// r(e) = (1/(2m) - (1-delta) * q(e)) / delta for each directed edge
/// e = (v, w), where q(e) = (1 - h[v][L]) / sum_u (1 - h[u][L]) is the
/// success-conditioned distribution of the approximate sampler and
/// L = ht.ell() is the survivor level (one less than the sampler's
/// walk-length cap: a length-k walk has a heavy prefix of k - 1 steps).
///
/// Requires 2^-L <= delta, which makes every weight nonnegative.
pub fn build_correction<S: Scalar>(
    g: &Graph,
    ht: &HTable<S>,
    delta: S,
) -> Result<CorrectionDistribution<S>> {
    let ell = ht.ell();
    if delta <= S::zero() || delta > S::ratio(1, 2) {
        return Err(Error::InvalidParameter("delta outside (0, 1/2]".into()));
    }
    if ell >= 64 || delta < S::ratio(1, 1u64 << ell) {
        return Err(Error::InvalidParameter(format!(
            "nonnegativity needs 2^-ell <= delta (ell = {ell})"
        )));
    }
    let dir = g.directed_edge_count() as u64;
    if dir == 0 {
        return Err(Error::InvalidParameter("graph has no edges".into()));
    }
    let survivors: Vec<S> = g
        .directed_edges()
        .map(|(v, _)| S::one() - ht.get(v, ell).clone())
        .collect();
    let mut total = S::zero();
    for s in &survivors {
        total = total + s.clone();
    }
    let uniform = S::ratio(1, dir);
    let keep = S::one() - delta.clone();
    let mut weights = Vec::with_capacity(survivors.len());
    for (id, s) in survivors.into_iter().enumerate() {
        let q = s / total.clone();
        let r = (uniform.clone() - keep.clone() * q) / delta.clone();
        if r < S::zero() {
            let (u, v) = g.directed_endpoints(id);
            return Err(Error::NegativeCorrectionWeight { u, v, weight: r.to_f64() });
        }
        weights.push(r);
    }
    let sum: f64 = weights.iter().map(Scalar::to_f64).sum();
    debug_assert!((sum - 1.0).abs() <= 1e-9, "correction weights sum to {sum}");
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in &weights {
        acc += w.to_f64();
        cumulative.push(acc);
    }
    Ok(CorrectionDistribution { weights, cumulative })
}

/// Analytic marginal (1-delta) * q(e) + delta * r(e) per directed edge for
/// a sampler with walk-length cap `ell`. In rational arithmetic this equals
/// 1/(2m) exactly.
pub fn exact_marginal<S: Scalar>(g: &Graph, delta: S, ell: usize) -> Result<Vec<S>> {
    assert!(ell >= 2);
    let cls = classify(g, g.m())?;
    let level = ell - 1;
    let ht: HTable<S> = HTable::compute(g, &cls, level);
    let corr = build_correction(g, &ht, delta.clone())?;
    let survivors: Vec<S> = g
        .directed_edges()
        .map(|(v, _)| S::one() - ht.get(v, level).clone())
        .collect();
    let mut total = S::zero();
    for s in &survivors {
        total = total + s.clone();
    }
    let keep = S::one() - delta.clone();
    Ok(survivors
        .into_iter()
        .zip(corr.weights())
        .map(|(s, r)| keep.clone() * (s / total.clone()) + delta.clone() * r.clone())
        .collect())
}

/// Exactly uniform edge sampler.
///
/// Requires the declared edge count to equal the true m; an upper bound
/// would skew the 1/(2m) target.
pub struct ExactSampler<'g> {
    graph: &'g Graph,
    cls: EdgeClassification,
    cfg: SamplerConfig,
    delta: f64,
    correction: OnceLock<CorrectionDistribution<f64>>,
}

impl<'g> ExactSampler<'g> {
    /// `delta` defaults to n^-3 clamped into (0, 1/2]. It is used as the
    /// branch probability, the approximate sampler's accuracy, and the
    /// correction denominator; the exactness algebra needs all three to
    /// coincide.
    pub fn new(graph: &'g Graph, delta: Option<f64>) -> Result<Self> {
        if graph.m() == 0 {
            return Err(Error::InvalidParameter("graph has no edges".into()));
        }
        let n = graph.n() as f64;
        let delta = delta.unwrap_or_else(|| (n.powi(-3)).min(0.5));
        if !(delta > 0.0 && delta <= 0.5) {
            return Err(Error::InvalidParameter(format!("delta {delta} outside (0, 1/2]")));
        }
        let cls = classify(graph, graph.m())?;
        let cfg = SamplerConfig::new(delta, graph.n(), graph.m())?;
        Ok(Self { graph, cls, cfg, delta, correction: OnceLock::new() })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.cfg
    }

    /// The memoized correction table; built on first use.
    pub fn correction(&self) -> &CorrectionDistribution<f64> {
        self.correction.get_or_init(|| {
            // Survivor level is one less than the walk-length cap.
            let ht: HTable<f64> = HTable::compute(self.graph, &self.cls, self.cfg.ell - 1);
            build_correction(self.graph, &ht, self.delta)
                .expect("nonnegativity holds for 2^-(ell-1) <= delta")
        })
    }

    /// Draws one exactly uniform edge. With probability 1 - delta this runs
    /// the approximate sampler through the oracle; with probability delta it
    /// draws from the correction table (reported with attempts = 0 and
    /// total_queries = 0, since that branch reads the graph directly).
    pub fn sample(&self, oracle: &mut QueryOracle<'_>, rng: &mut impl Rng) -> Result<EdgeSample> {
        if oracle.m_est() != self.graph.m() {
            return Err(Error::EdgeCountNotExact { m_est: oracle.m_est(), m: self.graph.m() });
        }
        if rng.random::<f64>() >= self.delta {
            sample_edge(oracle, rng, &self.cfg)
        } else {
            let id = self.correction().sample(rng);
            let (v, w) = self.graph.directed_endpoints(id);
            Ok(EdgeSample {
                edge: (v.min(w), v.max(w)),
                directed_form: (v, w),
                attempts: 0,
                total_queries: 0,
            })
        }
    }
}
