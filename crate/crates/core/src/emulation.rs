//! Emulated random-edge queries and the coupling testbed.
//!
//! An extended oracle adds a `random_edge` query on top of the standard
//! model, backed either by the true uniform distribution (test mode), the
//! approximate sampler, or the exact sampler. The coupling testbed builds
//! the maximal coupling of the approximate edge distribution with uniform
//! and measures how much a downstream consumer of edge samples can notice
//! the difference.

use crate::analysis::{exact_attempt_distribution, tv_distance, EdgeDistribution};
use crate::approx::{sample_edge, SamplerConfig};
use crate::error::{Error, Result};
use crate::exact::ExactSampler;
use crate::graph::{classify, Graph};
use crate::oracle::QueryOracle;
use crate::rng::SeedSource;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Where `random_edge` draws from.
#[derive(Debug, Clone, Copy)]
pub enum EdgeSource {
    /// Exactly uniform, reading the graph directly. Test mode only.
    TrueUniform,
    /// The approximate sampler at the given accuracy.
    Approx { epsilon: f64 },
    /// The exact sampler; `None` takes the n^-3 default.
    Exact { delta: Option<f64> },
}

enum SourceImpl<'g> {
    TrueUniform { graph: &'g Graph },
    Approx { cfg: SamplerConfig },
    Exact { sampler: ExactSampler<'g> },
}

/// Extended-model oracle: all standard queries pass through with counting
/// intact, plus a counted `random_edge` query.
pub struct ExtendedOracle<'g> {
    base: QueryOracle<'g>,
    source: SourceImpl<'g>,
    rng: ChaCha8Rng,
    random_edge_count: u64,
}

/// Wraps `base` with a `random_edge` source. `TrueUniform` and `Exact`
/// need full graph access and reject `full_access = None`.
pub fn make_extended<'g>(
    base: QueryOracle<'g>,
    source: EdgeSource,
    full_access: Option<&'g Graph>,
    rng: ChaCha8Rng,
) -> Result<ExtendedOracle<'g>> {
    let source = match source {
        EdgeSource::TrueUniform => {
            let graph = full_access.ok_or(Error::FullAccessRequired)?;
            SourceImpl::TrueUniform { graph }
        }
        EdgeSource::Approx { epsilon } => SourceImpl::Approx {
            cfg: SamplerConfig::new(epsilon, base.n(), base.m_est())?,
        },
        EdgeSource::Exact { delta } => {
            let graph = full_access.ok_or(Error::FullAccessRequired)?;
            SourceImpl::Exact { sampler: ExactSampler::new(graph, delta)? }
        }
    };
    Ok(ExtendedOracle { base, source, rng, random_edge_count: 0 })
}

impl<'g> ExtendedOracle<'g> {
    /// Draws an undirected edge (min, max) from the configured source.
    pub fn random_edge(&mut self) -> Result<(usize, usize)> {
        self.random_edge_count += 1;
        match &self.source {
            SourceImpl::TrueUniform { graph } => {
                let e = graph.edges()[self.rng.random_range(0..graph.m())];
                Ok(e)
            }
            SourceImpl::Approx { cfg } => {
                let cfg = *cfg;
                Ok(sample_edge(&mut self.base, &mut self.rng, &cfg)?.edge)
            }
            SourceImpl::Exact { sampler } => {
                Ok(sampler.sample(&mut self.base, &mut self.rng)?.edge)
            }
        }
    }

    pub fn random_edge_count(&self) -> u64 {
        self.random_edge_count
    }

    pub fn random_vertex(&mut self) -> usize {
        self.base.random_vertex()
    }

    pub fn degree(&mut self, v: usize) -> Result<usize> {
        self.base.degree(v)
    }

    pub fn neighbor(&mut self, v: usize, j: usize) -> Result<Option<usize>> {
        self.base.neighbor(v, j)
    }

    pub fn pair(&mut self, u: usize, v: usize) -> Result<bool> {
        self.base.pair(u, v)
    }

    pub fn base(&self) -> &QueryOracle<'g> {
        &self.base
    }
}

/// Maximal coupling of two distributions over the same finite support.
///
/// Shared-mass splitting: with probability sum_e min(p, q) both coordinates
/// return the same outcome drawn from the normalized min; otherwise each
/// draws from its own normalized residual. The disagreement probability of
/// the table equals TV(p, q) exactly.
pub struct MaximalCoupling {
    overlap_cdf: Vec<f64>,
    p_resid_cdf: Vec<f64>,
    q_resid_cdf: Vec<f64>,
    overlap: f64,
}

impl MaximalCoupling {
    pub fn new(p: &[f64], q: &[f64]) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::SupportMismatch(format!("{} vs {}", p.len(), q.len())));
        }
        let mins: Vec<f64> = p.iter().zip(q).map(|(&a, &b)| a.min(b)).collect();
        let overlap: f64 = mins.iter().sum();
        let cdf = |xs: &[f64]| {
            let mut acc = 0.0;
            xs.iter()
                .map(|x| {
                    acc += x;
                    acc
                })
                .collect::<Vec<_>>()
        };
        let p_resid: Vec<f64> = p.iter().zip(&mins).map(|(&a, &m)| a - m).collect();
        let q_resid: Vec<f64> = q.iter().zip(&mins).map(|(&b, &m)| b - m).collect();
        Ok(Self {
            overlap_cdf: cdf(&mins),
            p_resid_cdf: cdf(&p_resid),
            q_resid_cdf: cdf(&q_resid),
            overlap,
        })
    }

    /// P[X != Y] of the table, which equals TV(p, q).
    pub fn disagreement(&self) -> f64 {
        1.0 - self.overlap
    }

    /// One coupled draw (X, Y) of outcome indices.
    pub fn draw(&self, rng: &mut impl Rng) -> (usize, usize) {
        if rng.random::<f64>() < self.overlap {
            let i = sample_cdf(&self.overlap_cdf, rng);
            (i, i)
        } else {
            (sample_cdf(&self.p_resid_cdf, rng), sample_cdf(&self.q_resid_cdf, rng))
        }
    }

    /// Marginals of the coupling table, for checking they match p and q.
    pub fn marginals(&self) -> (Vec<f64>, Vec<f64>) {
        let undo = |cdf: &[f64]| {
            let mut prev = 0.0;
            cdf.iter()
                .map(|&c| {
                    let x = c - prev;
                    prev = c;
                    x
                })
                .collect::<Vec<f64>>()
        };
        let mins = undo(&self.overlap_cdf);
        let pr = undo(&self.p_resid_cdf);
        let qr = undo(&self.q_resid_cdf);
        let p = mins.iter().zip(&pr).map(|(a, b)| a + b).collect();
        let q = mins.iter().zip(&qr).map(|(a, b)| a + b).collect();
        (p, q)
    }
}

fn sample_cdf(cdf: &[f64], rng: &mut impl Rng) -> usize {
    let total = *cdf.last().expect("nonempty support");
    let x = rng.random::<f64>() * total;
    cdf.partition_point(|&c| c <= x).min(cdf.len() - 1)
}

/// Result of a coupled downstream experiment.
#[derive(Debug, Clone)]
pub struct CouplingReport {
    /// Empirical P[X != Y] per coupled draw.
    pub per_query_disagreement: f64,
    /// Exact TV between the approximate conditional edge distribution and
    /// uniform.
    pub tv_analytic: f64,
    /// Edge samples consumed per downstream run.
    pub k: usize,
    /// Empirical P[any of the k coupled pairs differ].
    pub stream_difference_rate: f64,
    /// |P[A in O] - P[A' in O]| over the coupled trials.
    pub downstream_divergence: f64,
    pub trials: u64,
}

/// The bundled demo downstream algorithm: accepts when the average of
/// d(u) + d(v) over the sampled edges is at least its exact uniform-edge
/// expectation. Output distribution is a simple function of the edge
/// distribution.
pub fn degree_sum_threshold_test(g: &Graph) -> impl Fn(&[(usize, usize)]) -> bool + '_ {
    let mean: f64 = g
        .edges()
        .iter()
        .map(|&(u, v)| (g.degree(u) + g.degree(v)) as f64)
        .sum::<f64>()
        / g.m() as f64;
    move |samples: &[(usize, usize)]| {
        let avg: f64 = samples
            .iter()
            .map(|&(u, v)| (g.degree(u) + g.degree(v)) as f64)
            .sum::<f64>()
            / samples.len() as f64;
        avg >= mean
    }
}

/// Couples the approximate sampler's conditional edge distribution with
/// uniform and runs `algorithm` on both streams of `k` undirected edges,
/// `trials` times.
pub fn coupled_run(
    algorithm: &dyn Fn(&[(usize, usize)]) -> bool,
    g: &Graph,
    epsilon: f64,
    k: usize,
    trials: u64,
    seed: u64,
) -> Result<CouplingReport> {
    if k == 0 || trials == 0 {
        return Err(Error::InvalidParameter("k and trials must be >= 1".into()));
    }
    let cls = classify(g, g.m())?;
    let cfg = SamplerConfig::new(epsilon, g.n(), g.m())?;
    let attempt: EdgeDistribution<f64> = exact_attempt_distribution(g, &cls, cfg.ell)?;
    let conditioned = attempt.condition();
    let d = conditioned.to_undirected(g);
    let u = vec![1.0 / g.m() as f64; g.m()];
    let tv_analytic = tv_distance(
        &EdgeDistribution { mass: d.clone(), fail_mass: 0.0, conditioned: true },
        &EdgeDistribution { mass: u.clone(), fail_mass: 0.0, conditioned: true },
    );
    let coupling = MaximalCoupling::new(&d, &u)?;

    let mut rng = SeedSource::new(seed).stream(0);
    let mut disagreements = 0u64;
    let mut stream_diffs = 0u64;
    let mut accept_x = 0u64;
    let mut accept_y = 0u64;
    let mut xs = Vec::with_capacity(k);
    let mut ys = Vec::with_capacity(k);
    for _ in 0..trials {
        xs.clear();
        ys.clear();
        let mut differ = false;
        for _ in 0..k {
            let (xi, yi) = coupling.draw(&mut rng);
            if xi != yi {
                disagreements += 1;
                differ = true;
            }
            xs.push(g.edges()[xi]);
            ys.push(g.edges()[yi]);
        }
        if differ {
            stream_diffs += 1;
        }
        if algorithm(&xs) {
            accept_x += 1;
        }
        if algorithm(&ys) {
            accept_y += 1;
        }
    }
    let per_query_disagreement = disagreements as f64 / (trials * k as u64) as f64;
    let stream_difference_rate = stream_diffs as f64 / trials as f64;
    let downstream_divergence =
        (accept_x as f64 - accept_y as f64).abs() / trials as f64;
    // A deterministic consumer can only diverge on trials where the
    // streams differ.
    assert!(downstream_divergence <= stream_difference_rate + 1e-12);
    Ok(CouplingReport {
        per_query_disagreement,
        tv_analytic,
        k,
        stream_difference_rate,
        downstream_divergence,
        trials,
    })
}
