//! Criterion benchmarks for the approximate and exact edge samplers.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use edge_sampling::{
    generate, sample_edge, ExactSampler, GeneratorSpec, Graph, QueryOracle, SamplerConfig,
    SeedSource,
};

fn families() -> Vec<(&'static str, Graph)> {
    let specs = [
        ("gnp_1k", GeneratorSpec::Gnp { n: 1_000, p: 4.0 / 999.0 }),
        ("gnp_10k", GeneratorSpec::Gnp { n: 10_000, p: 4.0 / 9_999.0 }),
        ("lollipop_1k", GeneratorSpec::Lollipop { clique_size: 32, path_len: 968 }),
        ("bipartite_1k", GeneratorSpec::CompleteBipartite { a: 4, b: 996 }),
    ];
    specs
        .into_iter()
        .map(|(id, spec)| (id, generate(&spec, 42).expect("generator succeeds")))
        .collect()
}

fn bench_approx(c: &mut Criterion) {
    let mut group = c.benchmark_group("approx_sample");
    group.throughput(Throughput::Elements(1));
    for (id, g) in families() {
        for epsilon in [0.5, 0.125] {
            let cfg = SamplerConfig::new(epsilon, g.n(), g.m()).unwrap();
            let seeds = SeedSource::new(7);
            let mut oracle = QueryOracle::new(&g, g.m(), seeds.stream(0));
            let mut rng = seeds.stream(1);
            group.bench_with_input(
                BenchmarkId::new(id, format!("eps_{epsilon}")),
                &cfg,
                |b, cfg| {
                    b.iter(|| sample_edge(&mut oracle, &mut rng, cfg).unwrap());
                },
            );
        }
    }
    group.finish();
}

fn bench_exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_sample");
    group.throughput(Throughput::Elements(1));
    for (id, g) in families() {
        let sampler = ExactSampler::new(&g, Some(0.01)).unwrap();
        // Pay the one-time correction-table cost outside the timed loop.
        sampler.correction();
        let seeds = SeedSource::new(7);
        let mut oracle = QueryOracle::new(&g, g.m(), seeds.stream(0));
        let mut rng = seeds.stream(1);
        group.bench_function(BenchmarkId::new(id, "delta_0.01"), |b| {
            b.iter(|| sampler.sample(&mut oracle, &mut rng).unwrap());
        });
    }
    group.finish();
}

fn bench_correction_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("correction_build");
    group.sample_size(20);
    for (id, g) in families() {
        group.bench_function(id, |b| {
            b.iter(|| {
                let sampler = ExactSampler::new(&g, Some(0.01)).unwrap();
                sampler.correction().weights().len()
            });
        });
    }
    group.finish();
}

criterion_group!(benches, bench_approx, bench_exact, bench_correction_build);
criterion_main!(benches);
