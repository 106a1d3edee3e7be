//! Brute-force distribution oracles, distribution distances, and
//! statistical checks.
//!
//! `exact_attempt_distribution` recomputes the single-attempt edge
//! distribution of the sampler by dynamic programming over (step, vertex),
//! independently of both the sampler and the h-table, so the closed-form
//! per-edge probabilities can be validated against it.

use crate::approx::{sample_edge, SamplerConfig};
use crate::error::{Error, Result};
use crate::exact::ExactSampler;
use crate::graph::{EdgeClassification, Graph};
use crate::htable::HTable;
use crate::numeric::Scalar;
use crate::oracle::QueryOracle;
use crate::rng::SeedSource;

use statrs::distribution::{ContinuousCDF, Normal};

/// Probability mass per directed edge (flat directed-id order) plus the
/// failure mass of an attempt.
#[derive(Debug, Clone)]
pub struct EdgeDistribution<S> {
    pub mass: Vec<S>,
    pub fail_mass: S,
    /// False for raw per-attempt mass, true after success-conditioning.
    pub conditioned: bool,
}

impl<S: Scalar> EdgeDistribution<S> {
    pub fn total_success(&self) -> S {
        let mut t = S::zero();
        for x in &self.mass {
            t = t + x.clone();
        }
        t
    }

    /// Success-conditioned distribution: mass / P[success], fail mass 0.
    pub fn condition(&self) -> Self {
        let total = self.total_success();
        assert!(total > S::zero(), "cannot condition on zero success mass");
        Self {
            mass: self.mass.iter().map(|x| x.clone() / total.clone()).collect(),
            fail_mass: S::zero(),
            conditioned: true,
        }
    }

    /// Folds the two directed copies of each undirected edge, indexed as
    /// `g.edges()`.
    pub fn to_undirected(&self, g: &Graph) -> Vec<S> {
        let mut out = vec![S::zero(); g.m()];
        for (id, (v, w)) in g.directed_edges().enumerate() {
            let e = g.edge_id(v, w).expect("directed edge projects to an edge");
            out[e] = out[e].clone() + self.mass[id].clone();
        }
        out
    }

    /// Uniform distribution over all directed edges.
    pub fn uniform(g: &Graph) -> Self {
        let dir = g.directed_edge_count();
        Self {
            mass: vec![S::ratio(1, dir as u64); dir],
            fail_mass: S::zero(),
            conditioned: true,
        }
    }
}

const ENUMERATION_GUARD: usize = 100_000_000;

/// Exact single-attempt edge distribution of the sampler (k uniform on
/// [ell]) by forward dynamic programming over walk prefixes.
pub fn exact_attempt_distribution<S: Scalar>(
    g: &Graph,
    cls: &EdgeClassification,
    ell: usize,
) -> Result<EdgeDistribution<S>> {
    assert!(ell >= 1);
    let work = (g.n() + 2 * g.m()).saturating_mul(ell);
    if work > ENUMERATION_GUARD {
        return Err(Error::ResourceGuard(format!(
            "attempt-distribution DP needs ~{work} steps (limit {ENUMERATION_GUARD})"
        )));
    }
    let n = g.n() as u64;
    let theta = cls.theta() as u64;
    let per_k = S::ratio(1, ell as u64);
    let mut mass = vec![S::zero(); g.directed_edge_count()];

    // k = 1: start at a light vertex v, slot j <= theta picks neighbor w.
    let start = S::ratio(1, n * theta);
    for v in 0..g.n() {
        if cls.is_light(v) {
            for slot in 0..g.degree(v) {
                let id = g.directed_id(v, slot);
                mass[id] = mass[id].clone() + per_k.clone() * start.clone();
            }
        }
    }

    // reach[v] = P[walk alive after i steps, at heavy v]; i = 1 seeds it.
    let mut reach = vec![S::zero(); g.n()];
    for v in 0..g.n() {
        if cls.is_light(v) {
            for &w in g.neighbors(v) {
                if cls.is_heavy(w) {
                    reach[w] = reach[w].clone() + start.clone();
                }
            }
        }
    }
    for _k in 2..=ell {
        // Final step of a length-k walk: uniform neighbor of the current
        // heavy vertex, target unconstrained.
        for v in 0..g.n() {
            if reach[v].is_zero() {
                continue;
            }
            let step = reach[v].clone() / S::ratio(g.degree(v) as u64, 1);
            for slot in 0..g.degree(v) {
                let id = g.directed_id(v, slot);
                mass[id] = mass[id].clone() + per_k.clone() * step.clone();
            }
        }
        // Advance the prefix one step, keeping only heavy targets.
        let mut next = vec![S::zero(); g.n()];
        for v in 0..g.n() {
            if reach[v].is_zero() {
                continue;
            }
            let step = reach[v].clone() / S::ratio(g.degree(v) as u64, 1);
            for &w in cls.heavy_neighbors(v) {
                next[w] = next[w].clone() + step.clone();
            }
        }
        reach = next;
    }

    let mut fail = S::one();
    for x in &mass {
        fail = fail - x.clone();
    }
    Ok(EdgeDistribution { mass, fail_mass: fail, conditioned: false })
}

/// Closed-form single-attempt distribution
/// (1 - h[v][ell-1]) / (ell*n*theta) per directed edge (v, w), with
/// h[.][0] = 0. The analytic counterpart of `exact_attempt_distribution`.
///
/// The survivor level is ell - 1, not ell: a walk of length k constrains
/// u_1..u_{k-1} to be heavy, so the longest heavy prefix ending at the edge
/// source has k - 1 <= ell - 1 steps.
pub fn formula_attempt_distribution<S: Scalar>(
    g: &Graph,
    cls: &EdgeClassification,
    ht: &HTable<S>,
    ell: usize,
) -> EdgeDistribution<S> {
    assert!(ell >= 1 && (ell == 1 || ht.ell() >= ell - 1));
    let denom = S::ratio(1, (ell * g.n() * cls.theta()) as u64);
    let mut mass = Vec::with_capacity(g.directed_edge_count());
    for (v, _) in g.directed_edges() {
        let survivor = if ell == 1 {
            // Only k = 1 walks exist: heavy-sourced edges are unreachable.
            if cls.is_heavy(v) {
                S::zero()
            } else {
                S::one()
            }
        } else {
            S::one() - ht.get(v, ell - 1).clone()
        };
        mass.push(survivor * denom.clone());
    }
    let mut fail = S::one();
    for x in &mass {
        fail = fail - x.clone();
    }
    EdgeDistribution { mass, fail_mass: fail, conditioned: false }
}

/// Pointwise distance max_e |p(e)/q(e) - 1|; requires q > 0 wherever p > 0.
pub fn pointwise_distance<S: Scalar>(p: &EdgeDistribution<S>, q: &EdgeDistribution<S>) -> Result<f64> {
    if p.mass.len() != q.mass.len() {
        return Err(Error::SupportMismatch(format!(
            "{} vs {} outcomes",
            p.mass.len(),
            q.mass.len()
        )));
    }
    let mut worst = 0.0f64;
    for (pe, qe) in p.mass.iter().zip(&q.mass) {
        if qe.is_zero() {
            if pe.is_zero() {
                continue;
            }
            return Err(Error::SupportMismatch("p has mass where q is zero".into()));
        }
        let ratio = (pe.clone() / qe.clone()).to_f64();
        worst = worst.max((ratio - 1.0).abs());
    }
    Ok(worst)
}

/// Total variation distance: half the L1 difference.
pub fn tv_distance<S: Scalar>(p: &EdgeDistribution<S>, q: &EdgeDistribution<S>) -> f64 {
    let len = p.mass.len().max(q.mass.len());
    let zero = S::zero();
    let mut l1 = 0.0f64;
    for i in 0..len {
        let pe = p.mass.get(i).unwrap_or(&zero);
        let qe = q.mass.get(i).unwrap_or(&zero);
        let d = if pe >= qe {
            pe.clone() - qe.clone()
        } else {
            qe.clone() - pe.clone()
        };
        l1 += d.to_f64();
    }
    l1 / 2.0
}

/// Which sampler an experiment runs.
#[derive(Debug, Clone, Copy)]
pub enum SamplerSpec {
    Approx { epsilon: f64 },
    Exact { delta: Option<f64> },
}

/// Tallies `count` undirected-edge samples, indexed as `g.edges()`.
/// Deterministic per seed.
pub fn empirical_distribution(
    spec: SamplerSpec,
    g: &Graph,
    count: u64,
    seed: u64,
) -> Result<Vec<u64>> {
    if count == 0 {
        return Err(Error::InvalidParameter("sample count must be >= 1".into()));
    }
    let seeds = SeedSource::new(seed);
    let mut oracle = QueryOracle::new(g, g.m(), seeds.stream(0));
    let mut rng = seeds.stream(1);
    let mut tallies = vec![0u64; g.m()];
    match spec {
        SamplerSpec::Approx { epsilon } => {
            let cfg = SamplerConfig::new(epsilon, g.n(), g.m())?;
            for _ in 0..count {
                let s = sample_edge(&mut oracle, &mut rng, &cfg)?;
                tallies[g.edge_id(s.edge.0, s.edge.1).unwrap()] += 1;
            }
        }
        SamplerSpec::Exact { delta } => {
            let sampler = ExactSampler::new(g, delta)?;
            for _ in 0..count {
                let s = sampler.sample(&mut oracle, &mut rng)?;
                tallies[g.edge_id(s.edge.0, s.edge.1).unwrap()] += 1;
            }
        }
    }
    Ok(tallies)
}

/// Chi-square goodness-of-fit against the uniform distribution.
#[derive(Debug, Clone, Copy)]
pub struct ChiSquare {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub critical_value: f64,
    pub reject: bool,
}

/// Tests `counts` against uniform at significance `alpha`. The critical
/// value uses the Wilson-Hilferty cube-root normal approximation of the
/// chi-square quantile. Requires total count >= 10 * cells.
pub fn chi_square_uniform(counts: &[u64], alpha: f64) -> Result<ChiSquare> {
    let cells = counts.len();
    if cells < 2 {
        return Err(Error::InvalidParameter("need at least 2 cells".into()));
    }
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} outside (0, 1)")));
    }
    let total: u64 = counts.iter().sum();
    if total < 10 * cells as u64 {
        return Err(Error::LowOccupancy { total, cells });
    }
    let expected = total as f64 / cells as f64;
    let statistic: f64 = counts
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum();
    let df = (cells - 1) as f64;
    let z = Normal::standard().inverse_cdf(1.0 - alpha);
    let wh = 1.0 - 2.0 / (9.0 * df) + z * (2.0 / (9.0 * df)).sqrt();
    let critical_value = df * wh.powi(3);
    Ok(ChiSquare {
        statistic,
        degrees_of_freedom: cells - 1,
        critical_value,
        reject: statistic > critical_value,
    })
}

/// One row of the scaling benchmark.
#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    pub mean_queries: f64,
    pub mean_attempts: f64,
    /// Expected attempts ell*n*theta / ((1-eps) * 2m).
    pub predicted_attempts: f64,
    pub nanos_per_sample: f64,
}

/// Measures mean query and attempt cost of `sample_edge` on one graph.
pub fn bench_graph(
    g: &Graph,
    graph_id: &str,
    epsilon: f64,
    trials: u64,
    seed: u64,
) -> Result<BenchRecord> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let cfg = SamplerConfig::new(epsilon, g.n(), g.m())?;
    let seeds = SeedSource::new(seed);
    let mut oracle = QueryOracle::new(g, g.m(), seeds.stream(0));
    let mut rng = seeds.stream(1);
    let mut attempts = 0u64;
    let start = std::time::Instant::now();
    for _ in 0..trials {
        attempts += sample_edge(&mut oracle, &mut rng, &cfg)?.attempts;
    }
    let elapsed = start.elapsed().as_nanos() as f64;
    let queries = oracle.counters().total();
    let predicted =
        (cfg.ell * g.n() * cfg.theta) as f64 / ((1.0 - epsilon) * 2.0 * g.m() as f64);
    Ok(BenchRecord {
        graph_id: graph_id.to_string(),
        n: g.n(),
        m: g.m(),
        epsilon,
        mean_queries: queries as f64 / trials as f64,
        mean_attempts: attempts as f64 / trials as f64,
        predicted_attempts: predicted,
        nanos_per_sample: elapsed / trials as f64,
    })
}

/// Runs `bench_graph` across a family of graphs.
pub fn bench_scaling(
    graphs: &[(String, Graph)],
    epsilon: f64,
    trials: u64,
    seed: u64,
) -> Result<Vec<BenchRecord>> {
    graphs
        .iter()
        .enumerate()
        .map(|(i, (id, g))| bench_graph(g, id, epsilon, trials, seed.wrapping_add(i as u64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::ell_of;
    use crate::graph::{classify, generate, GeneratorSpec};
    use num_rational::BigRational;


    fn dist(mass: Vec<f64>) -> EdgeDistribution<f64> {
        EdgeDistribution { mass, fail_mass: 0.0, conditioned: true }
    }

    #[test]
    fn star_attempt_distribution_by_hand() {
        let g = generate(&GeneratorSpec::Star { leaves: 4 }, 0).unwrap();
        let cls = classify(&g, g.m()).unwrap();
        let d: EdgeDistribution<BigRational> = exact_attempt_distribution(&g, &cls, 2).unwrap();
        for x in &d.mass {
            assert_eq!(*x, BigRational::ratio(1, 30));
        }
        assert_eq!(d.fail_mass, BigRational::ratio(22, 30));
        let cond = d.condition();
        for x in &cond.mass {
            assert_eq!(*x, BigRational::ratio(1, 8));
        }
    }

    #[test]
    fn double_star_attempt_distribution_by_hand() {
        let g = generate(&GeneratorSpec::DoubleStar { leaves_per_hub: 6 }, 0).unwrap();
        let cls = classify(&g, g.m()).unwrap();
        let d: EdgeDistribution<BigRational> = exact_attempt_distribution(&g, &cls, 2).unwrap();
        let light = BigRational::ratio(1, 168);
        // Hub survivor at level 1 is 1 - h[hub][1] = 6/7.
        let heavy = BigRational::ratio(6, 7 * 168);
        for (id, (v, _)) in g.directed_edges().enumerate() {
            let expect = if cls.is_light(v) { &light } else { &heavy };
            assert_eq!(d.mass[id], *expect, "source {v}");
        }
    }

    #[test]
    fn dp_matches_formula_rational() {
        for (spec, seed) in [
            (GeneratorSpec::DoubleStar { leaves_per_hub: 6 }, 0),
            (GeneratorSpec::Lollipop { clique_size: 6, path_len: 8 }, 0),
            (GeneratorSpec::Gnp { n: 40, p: 0.2 }, 5),
        ] {
            let g = generate(&spec, seed).unwrap();
            let cls = classify(&g, g.m()).unwrap();
            for eps in [0.5, 0.25] {
                let ell = ell_of(eps).unwrap();
                let dp: EdgeDistribution<BigRational> =
                    exact_attempt_distribution(&g, &cls, ell).unwrap();
                let ht = HTable::compute(&g, &cls, ell - 1);
                let formula = formula_attempt_distribution(&g, &cls, &ht, ell);
                assert_eq!(dp.mass, formula.mass, "{spec:?} eps={eps}");
            }
        }
    }

    #[test]
    fn conditioned_distribution_is_pointwise_close() {
        let g = generate(&GeneratorSpec::Gnp { n: 100, p: 0.1 }, 8).unwrap();
        let cls = classify(&g, g.m()).unwrap();
        for eps in [0.5, 0.25, 1.0 / 16.0] {
            let ell = ell_of(eps).unwrap();
            let d: EdgeDistribution<f64> = exact_attempt_distribution(&g, &cls, ell).unwrap();
            let dist = pointwise_distance(&d.condition(), &EdgeDistribution::uniform(&g)).unwrap();
            assert!(dist <= eps, "eps={eps} dist={dist}");
        }
    }

    #[test]
    fn pointwise_distance_hand_values() {
        assert_eq!(
            pointwise_distance(&dist(vec![0.5, 0.5]), &dist(vec![0.5, 0.5])).unwrap(),
            0.0
        );
        let d = pointwise_distance(&dist(vec![0.5, 0.5]), &dist(vec![0.6, 0.4])).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
        assert!(pointwise_distance(&dist(vec![0.5, 0.5]), &dist(vec![1.0, 0.0])).is_err());
    }

    #[test]
    fn tv_distance_hand_values() {
        assert_eq!(tv_distance(&dist(vec![0.3, 0.7]), &dist(vec![0.3, 0.7])), 0.0);
        assert!((tv_distance(&dist(vec![1.0, 0.0]), &dist(vec![0.5, 0.5])) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tv_at_most_pointwise() {
        let g = generate(&GeneratorSpec::CompleteBipartite { a: 4, b: 30 }, 0).unwrap();
        let cls = classify(&g, g.m()).unwrap();
        let d: EdgeDistribution<f64> = exact_attempt_distribution(&g, &cls, 3).unwrap().condition();
        let u = EdgeDistribution::uniform(&g);
        assert!(tv_distance(&d, &u) <= pointwise_distance(&d, &u).unwrap() + 1e-15);
    }

    #[test]
    fn empirical_distribution_deterministic() {
        let g = Graph::parse("3 2\n0 1\n1 2\n").unwrap();
        let a = empirical_distribution(SamplerSpec::Approx { epsilon: 0.5 }, &g, 2000, 13).unwrap();
        let b = empirical_distribution(SamplerSpec::Approx { epsilon: 0.5 }, &g, 2000, 13).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().sum::<u64>(), 2000);
        assert!(
            empirical_distribution(SamplerSpec::Approx { epsilon: 0.5 }, &g, 0, 13).is_err()
        );
    }

    #[test]
    fn exact_sampler_on_path_is_balanced() {
        let g = Graph::parse("3 2\n0 1\n1 2\n").unwrap();
        let n = 200_000u64;
        let t = empirical_distribution(SamplerSpec::Exact { delta: None }, &g, n, 21).unwrap();
        let sd = (n as f64 * 0.25).sqrt();
        for &c in &t {
            assert!((c as f64 - n as f64 / 2.0).abs() < 4.0 * sd, "{t:?}");
        }
    }

    #[test]
    fn chi_square_edge_cases() {
        let even = chi_square_uniform(&[250, 250, 250, 250], 0.001).unwrap();
        assert_eq!(even.statistic, 0.0);
        assert!(!even.reject);

        let skewed = chi_square_uniform(&[1000, 0], 0.001).unwrap();
        assert_eq!(skewed.statistic, 1000.0);
        assert!(skewed.reject);

        assert!(matches!(
            chi_square_uniform(&[5, 5], 0.001),
            Err(Error::LowOccupancy { .. })
        ));
    }

    #[test]
    fn chi_square_critical_value_sane() {
        // chi2 0.999-quantile at df=9 is about 27.88; Wilson-Hilferty is
        // good to a few percent there.
        let r = chi_square_uniform(&[10; 10], 0.001).unwrap();
        assert!((r.critical_value - 27.88).abs() < 0.5, "{}", r.critical_value);
    }

    #[test]
    fn bench_record_prediction() {
        let g = generate(&GeneratorSpec::Star { leaves: 4 }, 0).unwrap();
        let r = bench_graph(&g, "star4", 0.5, 50_000, 3).unwrap();
        // The record's prediction is the worst-case bound ell*n*theta /
        // ((1-eps)*2m) = 7.5; the true mean on a star (all survivors 1)
        // is 30/8.
        assert!((r.predicted_attempts - 7.5).abs() < 1e-12);
        let p: f64 = 8.0 / 30.0;
        let se = ((1.0 - p) / (p * p * 50_000.0)).sqrt();
        assert!((r.mean_attempts - 30.0 / 8.0).abs() < 4.0 * se);
        assert!(r.mean_attempts <= r.predicted_attempts);
        assert!(r.mean_queries > 0.0);
    }
}
