//! Approximate uniform edge sampling via constrained random walks.
//!
//! A sampling attempt with walk length k starts at a uniform vertex, rejects
//! heavy starts and over-range neighbor indices, then walks only through
//! heavy vertices, returning the final directed edge. Repeating attempts with
//! k uniform on [ell] yields a directed-edge distribution pointwise
//! epsilon-close to uniform.

use crate::error::{Error, Result};
use crate::oracle::QueryOracle;
use rand::Rng;

/// Walk-length cap for accuracy `epsilon`: smallest ell with
/// 2^(1-ell) <= epsilon, i.e. ceil(log2(1/epsilon)) + 1.
pub fn ell_of(epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let mut k = 0u32;
    while 0.5f64.powi(k as i32) > epsilon {
        k += 1;
    }
    Ok(k as usize + 1)
}

/// Parameters of the approximate sampler.
#[derive(Debug, Clone, Copy)]
pub struct SamplerConfig {
    pub epsilon: f64,
    pub ell: usize,
    pub theta: usize,
    pub max_attempts: u64,
}

impl SamplerConfig {
    /// Derives ell and theta for a graph with `n` vertices and declared edge
    /// count `m_est` (exact or upper bound). The default attempt cap is
    /// 64 * ceil(ell*n*theta / (2*m_est*(1-epsilon))), far beyond the
    /// expected geometric tail.
    pub fn new(epsilon: f64, n: usize, m_est: usize) -> Result<Self> {
        let ell = ell_of(epsilon)?;
        if m_est == 0 {
            return Err(Error::ZeroEdgeBound { m: 0 });
        }
        let theta = (2.0 * m_est as f64).sqrt().ceil() as usize;
        let expected = (ell * n * theta) as f64 / (2.0 * m_est as f64 * (1.0 - epsilon));
        let max_attempts = 64 * expected.ceil() as u64;
        Ok(Self { epsilon, ell, theta, max_attempts })
    }

    pub fn with_max_attempts(mut self, max_attempts: u64) -> Self {
        self.max_attempts = max_attempts;
        self
    }
}

/// Result of one sampling attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttemptOutcome {
    /// Directed edge (v, w) on success.
    pub result: Option<(usize, usize)>,
    pub k_used: usize,
    pub queries_used: u64,
}

/// A successfully sampled edge with its cost accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeSample {
    /// Unordered projection (min, max) of the directed sample.
    pub edge: (usize, usize),
    pub directed_form: (usize, usize),
    pub attempts: u64,
    pub total_queries: u64,
}

impl EdgeSample {
    fn from_directed(v: usize, w: usize, attempts: u64, total_queries: u64) -> Self {
        Self { edge: (v.min(w), v.max(w)), directed_form: (v, w), attempts, total_queries }
    }
}

/// One constrained random walk of length `k`. Failure is a normal outcome.
///
/// Issues at most 2k + 2 oracle queries.
pub fn sampling_attempt(
    oracle: &mut QueryOracle<'_>,
    rng: &mut impl Rng,
    k: usize,
    theta: usize,
) -> Result<AttemptOutcome> {
    assert!(k >= 1, "walk length k must be >= 1");
    let before = oracle.counters().total();
    let fail = |oracle: &QueryOracle<'_>| AttemptOutcome {
        result: None,
        k_used: k,
        queries_used: oracle.counters().total() - before,
    };

    let u0 = oracle.random_vertex();
    if oracle.degree(u0)? > theta {
        return Ok(fail(oracle));
    }
    let j = rng.random_range(1..=theta);
    // The j-th neighbor may not exist; that fails the attempt even at k = 1.
    let Some(mut current) = oracle.neighbor(u0, j)? else {
        return Ok(fail(oracle));
    };
    let mut prev = u0;
    for _ in 2..=k {
        let d = oracle.degree(current)?;
        if d <= theta {
            return Ok(fail(oracle));
        }
        let step = rng.random_range(1..=d);
        let next = oracle.neighbor(current, step)?.expect("step index within degree");
        prev = current;
        current = next;
    }
    Ok(AttemptOutcome {
        result: Some((prev, current)),
        k_used: k,
        queries_used: oracle.counters().total() - before,
    })
}

/// Repeats sampling attempts with k uniform on [ell] until one succeeds.
///
/// Conditioned on success, the directed-edge distribution is pointwise
/// epsilon-close to uniform; the unordered projection is epsilon-close to
/// uniform over undirected edges.
pub fn sample_edge(
    oracle: &mut QueryOracle<'_>,
    rng: &mut impl Rng,
    cfg: &SamplerConfig,
) -> Result<EdgeSample> {
    let start = oracle.counters().total();
    for attempt in 1..=cfg.max_attempts {
        let k = rng.random_range(1..=cfg.ell);
        let outcome = sampling_attempt(oracle, rng, k, cfg.theta)?;
        if let Some((v, w)) = outcome.result {
            return Ok(EdgeSample::from_directed(
                v,
                w,
                attempt,
                oracle.counters().total() - start,
            ));
        }
    }
    Err(Error::MaxAttemptsExceeded(cfg.max_attempts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{classify, generate, GeneratorSpec, Graph};
    use crate::rng::SeedSource;

    fn star4() -> Graph {
        generate(&GeneratorSpec::Star { leaves: 4 }, 0).unwrap()
    }

    #[test]
    fn ell_of_values() {
        assert_eq!(ell_of(0.5).unwrap(), 2);
        assert_eq!(ell_of(0.25).unwrap(), 3);
        assert_eq!(ell_of(0.125).unwrap(), 4);
        assert_eq!(ell_of(0.1).unwrap(), 5);
        assert_eq!(ell_of(1.0 / 16.0).unwrap(), 5);
        assert!(ell_of(0.0).is_err());
        assert!(ell_of(0.6).is_err());
    }

    #[test]
    fn config_invariant() {
        for eps in [0.5, 0.25, 0.1, 0.01] {
            let cfg = SamplerConfig::new(eps, 100, 200).unwrap();
            assert!(cfg.ell >= 2);
            assert!(0.5f64.powi(cfg.ell as i32) <= eps / 2.0, "eps={eps}");
        }
    }

    #[test]
    fn heavy_start_fails_at_k1() {
        let g = star4();
        let cls = classify(&g, g.m()).unwrap();
        let seeds = SeedSource::new(3);
        let mut oracle = QueryOracle::new(&g, g.m(), seeds.stream(0));
        let mut rng = seeds.stream(1);
        for _ in 0..200 {
            let out = sampling_attempt(&mut oracle, &mut rng, 1, cls.theta()).unwrap();
            if let Some((v, _)) = out.result {
                assert_ne!(v, 0, "heavy center returned at k=1");
            }
        }
    }

    #[test]
    fn success_source_class_matches_k() {
        let g = generate(&GeneratorSpec::DoubleStar { leaves_per_hub: 6 }, 0).unwrap();
        let cls = classify(&g, g.m()).unwrap();
        let seeds = SeedSource::new(4);
        let mut oracle = QueryOracle::new(&g, g.m(), seeds.stream(0));
        let mut rng = seeds.stream(1);
        for k in [1usize, 2, 3] {
            for _ in 0..500 {
                let out = sampling_attempt(&mut oracle, &mut rng, k, cls.theta()).unwrap();
                if let Some((v, _)) = out.result {
                    if k == 1 {
                        assert!(cls.is_light(v));
                    } else {
                        assert!(cls.is_heavy(v));
                    }
                }
            }
        }
    }

    #[test]
    fn query_budget_per_attempt() {
        let g = generate(&GeneratorSpec::Gnp { n: 80, p: 0.15 }, 2).unwrap();
        let cls = classify(&g, g.m()).unwrap();
        let seeds = SeedSource::new(5);
        let mut oracle = QueryOracle::new(&g, g.m(), seeds.stream(0));
        let mut rng = seeds.stream(1);
        for k in 1..=6 {
            for _ in 0..1000 {
                let out = sampling_attempt(&mut oracle, &mut rng, k, cls.theta()).unwrap();
                assert!(out.queries_used <= 2 * k as u64 + 2, "k={k}: {}", out.queries_used);
            }
        }
    }

    #[test]
    fn star_success_rate() {
        // Per-attempt success probability at eps = 1/2 is 8/30.
        let g = star4();
        let cfg = SamplerConfig::new(0.5, g.n(), g.m()).unwrap();
        assert_eq!(cfg.ell, 2);
        assert_eq!(cfg.theta, 3);
        let seeds = SeedSource::new(6);
        let mut oracle = QueryOracle::new(&g, g.m(), seeds.stream(0));
        let mut rng = seeds.stream(1);
        let runs = 20_000u64;
        let mut attempts = 0u64;
        for _ in 0..runs {
            attempts += sample_edge(&mut oracle, &mut rng, &cfg).unwrap().attempts;
        }
        let mean = attempts as f64 / runs as f64;
        let p: f64 = 8.0 / 30.0;
        let se = ((1.0 - p) / (p * p * runs as f64)).sqrt();
        assert!((mean - 1.0 / p).abs() < 4.0 * se, "mean={mean}");
    }

    #[test]
    fn sample_projection_is_unordered() {
        let g = generate(&GeneratorSpec::DoubleStar { leaves_per_hub: 6 }, 0).unwrap();
        let cfg = SamplerConfig::new(0.5, g.n(), g.m()).unwrap();
        let seeds = SeedSource::new(7);
        let mut oracle = QueryOracle::new(&g, g.m(), seeds.stream(0));
        let mut rng = seeds.stream(1);
        for _ in 0..200 {
            let s = sample_edge(&mut oracle, &mut rng, &cfg).unwrap();
            let (v, w) = s.directed_form;
            assert_eq!(s.edge, (v.min(w), v.max(w)));
            assert!(g.has_edge(v, w));
            assert!(s.attempts >= 1);
        }
    }

    #[test]
    fn max_attempts_error_on_edgeless_graph() {
        let g = Graph::from_edges(5, &[]).unwrap();
        // Declared bound must be >= 1 for a config to exist; the sampler can
        // then never succeed.
        let cfg = SamplerConfig::new(0.5, g.n(), 1).unwrap().with_max_attempts(50);
        let seeds = SeedSource::new(8);
        let mut oracle = QueryOracle::new(&g, 1, seeds.stream(0));
        let mut rng = seeds.stream(1);
        assert!(matches!(
            sample_edge(&mut oracle, &mut rng, &cfg),
            Err(Error::MaxAttemptsExceeded(50))
        ));
    }
}
