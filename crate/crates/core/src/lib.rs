//! Sublinear-time uniform edge sampling in the standard graph query model.
//!
//! Provides the constrained-random-walk approximate sampler, the exact
//! sampler that mixes in an explicit correction distribution, an
//! instrumented query oracle, emulated random-edge queries with a coupling
//! testbed, and brute-force verification machinery that recomputes the
//! per-edge sampling probabilities analytically on small graphs.

pub mod analysis;
pub mod approx;
pub mod emulation;
pub mod error;
pub mod exact;
pub mod graph;
pub mod htable;
pub mod numeric;
pub mod oracle;
pub mod rng;

pub use analysis::{
    bench_graph, bench_scaling, chi_square_uniform, empirical_distribution,
    exact_attempt_distribution, formula_attempt_distribution, pointwise_distance, tv_distance,
    BenchRecord, ChiSquare, EdgeDistribution, SamplerSpec,
};
pub use approx::{ell_of, sample_edge, sampling_attempt, AttemptOutcome, EdgeSample, SamplerConfig};
pub use emulation::{
    coupled_run, degree_sum_threshold_test, make_extended, CouplingReport, EdgeSource,
    ExtendedOracle, MaximalCoupling,
};
pub use error::{Error, Result};
pub use exact::{build_correction, exact_marginal, CorrectionDistribution, ExactSampler};
pub use graph::{classify, generate, EdgeClassification, GeneratorSpec, Graph};
pub use htable::{h_walk_oracle, HTable};
pub use numeric::Scalar;
pub use oracle::{QueryCounters, QueryOracle};
pub use rng::SeedSource;
