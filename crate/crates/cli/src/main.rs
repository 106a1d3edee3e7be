//! Command-line front end for the edge-sampling library.
//!
//! Subcommands: `generate`, `sample`, `exact-sample`, `couple`, `verify`,
//! `bench`. Exit code 0 on success, 2 when `verify` finds a discrepancy,
//! 1 on usage or runtime errors.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use edge_sampling::{
    bench_scaling, build_correction, chi_square_uniform, classify, coupled_run,
    degree_sum_threshold_test, empirical_distribution, exact_attempt_distribution,
    formula_attempt_distribution, generate, pointwise_distance, tv_distance, ExactSampler,
    Graph, GeneratorSpec, HTable, QueryOracle, SamplerConfig, SamplerSpec, SeedSource,
};

#[derive(Parser)]
#[command(name = "edge-sampling", version, about = "Sublinear uniform edge sampling")]
struct Cli {
    /// Master RNG seed; every run is deterministic given the seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format for tabular outputs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph from a family spec and write it as an edge list.
    Generate(GenerateArgs),
    /// Draw approximate uniform edge samples.
    Sample(SampleArgs),
    /// Draw exactly uniform edge samples.
    ExactSample(ExactSampleArgs),
    /// Couple the approximate sampler against true uniform and compare a
    /// downstream consumer on both streams.
    Couple(CoupleArgs),
    /// Check the analytic per-edge formula against brute-force enumeration.
    Verify(VerifyArgs),
    /// Measure query cost across graph sizes.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Family spec: star:LEAVES, double-star:LEAVES, lollipop:CLIQUE,PATH,
    /// gnp:N,P, complete-bipartite:A,B.
    #[arg(long)]
    family: String,
}

#[derive(Args)]
struct SampleArgs {
    /// Edge-list file ("n m" header, one "u v" line per edge).
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 1)]
    count: u64,
}

#[derive(Args)]
struct ExactSampleArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Mixing weight of the correction branch; defaults to min(n^-3, 1/2).
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Write the correction table as CSV rows (v, w, q, r).
    #[arg(long)]
    dump_correction: Option<PathBuf>,
}

#[derive(Args)]
struct CoupleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    epsilon: f64,
    /// Edge samples consumed per downstream run.
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Accuracies to verify at.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.25, 0.0625])]
    epsilon: Vec<f64>,
    /// Absolute per-edge tolerance between enumeration and formula.
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    /// Write the h-table as CSV rows (vertex, level, value).
    #[arg(long)]
    dump_htable: Option<PathBuf>,
    /// Also chi-square-test this many empirical draws against uniform.
    #[arg(long)]
    empirical: Option<u64>,
}

#[derive(Args)]
struct BenchArgs {
    /// Family to scale: gnp, star, lollipop, complete-bipartite.
    #[arg(long, default_value = "gnp")]
    family: String,
    /// Vertex counts to bench at.
    #[arg(long, value_delimiter = ',', default_values_t = [1000usize, 10_000])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match &cli.command {
        Command::Generate(args) => cmd_generate(cli, args),
        Command::Sample(args) => cmd_sample(cli, args),
        Command::ExactSample(args) => cmd_exact_sample(cli, args),
        Command::Couple(args) => cmd_couple(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Bench(args) => cmd_bench(cli, args),
    }
}

/// Parses "name:a,b" family specs.
fn parse_family(s: &str) -> Result<GeneratorSpec, String> {
    let (name, rest) = s.split_once(':').ok_or("family needs name:params")?;
    let parts: Vec<&str> = rest.split(',').collect();
    let usize_at = |i: usize| -> Result<usize, String> {
        parts
            .get(i)
            .ok_or_else(|| format!("{name} needs parameter {}", i + 1))?
            .trim()
            .parse::<usize>()
            .map_err(|e| e.to_string())
    };
    match name {
        "star" => Ok(GeneratorSpec::Star { leaves: usize_at(0)? }),
        "double-star" | "double_star" => {
            Ok(GeneratorSpec::DoubleStar { leaves_per_hub: usize_at(0)? })
        }
        "lollipop" => Ok(GeneratorSpec::Lollipop {
            clique_size: usize_at(0)?,
            path_len: usize_at(1)?,
        }),
        "gnp" => {
            let p: f64 = parts
                .get(1)
                .ok_or("gnp needs n,p")?
                .trim()
                .parse()
                .map_err(|e: std::num::ParseFloatError| e.to_string())?;
            Ok(GeneratorSpec::Gnp { n: usize_at(0)?, p })
        }
        "complete-bipartite" | "complete_bipartite" => Ok(GeneratorSpec::CompleteBipartite {
            a: usize_at(0)?,
            b: usize_at(1)?,
        }),
        other => Err(format!("unknown family {other}")),
    }
}

fn graph_header(g: &Graph) -> Result<Value, Box<dyn std::error::Error>> {
    let cls = classify(g, g.m())?;
    Ok(json!({ "n": g.n(), "m": g.m(), "theta": cls.theta() }))
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
        }
    }
}

/// Writes `rows` (all of equal shape) under the shared report schema.
fn emit_report(
    cli: &Cli,
    graph: Value,
    config: Value,
    header: &[&str],
    rows: Vec<Vec<Value>>,
) -> Result<(), Box<dyn std::error::Error>> {
    match cli.format {
        Format::Json => {
            let results: Vec<Value> = rows
                .into_iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    for (key, val) in header.iter().zip(row) {
                        obj.insert((*key).to_string(), val);
                    }
                    Value::Object(obj)
                })
                .collect();
            let report = json!({ "graph": graph, "config": config, "results": results });
            emit(cli, &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header)?;
            for row in rows {
                let rec: Vec<String> = row
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                w.write_record(&rec)?;
            }
            emit(cli, &String::from_utf8(w.into_inner()?)?)?;
        }
    }
    Ok(())
}

fn cmd_generate(cli: &Cli, args: &GenerateArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let spec = parse_family(&args.family)?;
    let g = generate(&spec, cli.seed)?;
    emit(cli, &g.to_edge_list())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(cli: &Cli, args: &SampleArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let g = Graph::load(&args.graph)?;
    let cfg = SamplerConfig::new(args.epsilon, g.n(), g.m())?;
    let seeds = SeedSource::new(cli.seed);
    let mut oracle = QueryOracle::new(&g, g.m(), seeds.stream(0));
    let mut rng = seeds.stream(1);
    let mut rows = Vec::with_capacity(args.count as usize);
    for _ in 0..args.count {
        let s = edge_sampling::sample_edge(&mut oracle, &mut rng, &cfg)?;
        rows.push(vec![
            json!(s.edge.0),
            json!(s.edge.1),
            json!(s.attempts),
            json!(s.total_queries),
        ]);
    }
    let config = json!({
        "epsilon": args.epsilon, "ell": cfg.ell, "count": args.count, "seed": cli.seed,
    });
    emit_report(cli, graph_header(&g)?, config, &["u", "v", "attempts", "queries"], rows)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_exact_sample(
    cli: &Cli,
    args: &ExactSampleArgs,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let g = Graph::load(&args.graph)?;
    let sampler = ExactSampler::new(&g, args.delta)?;
    let seeds = SeedSource::new(cli.seed);
    let mut oracle = QueryOracle::new(&g, g.m(), seeds.stream(0));
    let mut rng = seeds.stream(1);
    let mut rows = Vec::with_capacity(args.count as usize);
    for _ in 0..args.count {
        let s = sampler.sample(&mut oracle, &mut rng)?;
        rows.push(vec![
            json!(s.edge.0),
            json!(s.edge.1),
            json!(s.attempts),
            json!(s.total_queries),
        ]);
    }
    if let Some(path) = &args.dump_correction {
        dump_correction(&g, sampler.config(), sampler.delta(), path)?;
    }
    let config = json!({
        "delta": sampler.delta(), "ell": sampler.config().ell,
        "count": args.count, "seed": cli.seed,
    });
    emit_report(cli, graph_header(&g)?, config, &["u", "v", "attempts", "queries"], rows)?;
    Ok(ExitCode::SUCCESS)
}

/// CSV rows (v, w, q, r) per directed edge: the sampler's conditional mass q
/// and the correction weight r.
fn dump_correction(
    g: &Graph,
    cfg: &SamplerConfig,
    delta: f64,
    path: &PathBuf,
) -> Result<(), Box<dyn std::error::Error>> {
    let cls = classify(g, g.m())?;
    let level = cfg.ell - 1;
    let ht: HTable<f64> = HTable::compute(g, &cls, level);
    let corr = build_correction(g, &ht, delta)?;
    let survivors: Vec<f64> = g.directed_edges().map(|(v, _)| 1.0 - ht.get(v, level)).collect();
    let total: f64 = survivors.iter().sum();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["v", "w", "q", "r"])?;
    for (id, (v, u)) in g.directed_edges().enumerate() {
        w.write_record(&[
            v.to_string(),
            u.to_string(),
            (survivors[id] / total).to_string(),
            corr.weights()[id].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_couple(cli: &Cli, args: &CoupleArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let g = Graph::load(&args.graph)?;
    let algorithm = degree_sum_threshold_test(&g);
    let report = coupled_run(&algorithm, &g, args.epsilon, args.k, args.trials, cli.seed)?;
    let config = json!({
        "epsilon": args.epsilon, "k": args.k, "trials": args.trials, "seed": cli.seed,
        "algorithm": "degree_sum_threshold",
    });
    let rows = vec![vec![
        json!(report.tv_analytic),
        json!(report.per_query_disagreement),
        json!(report.stream_difference_rate),
        json!(report.downstream_divergence),
    ]];
    emit_report(
        cli,
        graph_header(&g)?,
        config,
        &[
            "tv_analytic",
            "per_query_disagreement",
            "stream_difference_rate",
            "downstream_divergence",
        ],
        rows,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let g = Graph::load(&args.graph)?;
    let cls = classify(&g, g.m())?;
    let mut rows = Vec::new();
    let mut ok = true;
    let mut max_ell = 1usize;
    for &eps in &args.epsilon {
        let cfg = SamplerConfig::new(eps, g.n(), g.m())?;
        max_ell = max_ell.max(cfg.ell);
        let enumerated = exact_attempt_distribution(&g, &cls, cfg.ell)?;
        let level = cfg.ell.saturating_sub(1).max(1);
        let ht: HTable<f64> = HTable::compute(&g, &cls, level);
        let formula = formula_attempt_distribution(&g, &cls, &ht, cfg.ell);
        let max_abs: f64 = enumerated
            .mass
            .iter()
            .zip(&formula.mass)
            .map(|(a, b): (&f64, &f64)| (a - b).abs())
            .fold(0.0, f64::max);
        let conditional = enumerated.condition();
        let uniform = edge_sampling::EdgeDistribution::uniform(&g);
        let pointwise = pointwise_distance(&conditional, &uniform)?;
        let tv = tv_distance(&conditional, &uniform);
        let pass = max_abs <= args.tolerance && pointwise <= eps;
        ok &= pass;
        rows.push(vec![
            json!("formula"),
            json!(eps),
            json!(cfg.ell),
            json!(max_abs),
            json!(pointwise),
            json!(tv),
            Value::Null,
            Value::Null,
            json!(pass),
        ]);
    }
    if let Some(count) = args.empirical {
        let counts =
            empirical_distribution(SamplerSpec::Exact { delta: None }, &g, count, cli.seed)?;
        let chi = chi_square_uniform(&counts, 0.01)?;
        ok &= !chi.reject;
        rows.push(vec![
            json!("chi_square"),
            Value::Null,
            Value::Null,
            Value::Null,
            Value::Null,
            Value::Null,
            json!(chi.statistic),
            json!(chi.critical_value),
            json!(!chi.reject),
        ]);
    }
    if let Some(path) = &args.dump_htable {
        let ht: HTable<f64> = HTable::compute(&g, &cls, max_ell.max(2) - 1);
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["vertex", "level", "value"])?;
        for (v, i, x) in ht.rows() {
            w.write_record(&[v.to_string(), i.to_string(), x.to_string()])?;
        }
        w.flush()?;
    }
    let config = json!({
        "epsilon": args.epsilon, "tolerance": args.tolerance, "seed": cli.seed,
    });
    emit_report(
        cli,
        graph_header(&g)?,
        config,
        &[
            "check",
            "epsilon",
            "ell",
            "max_abs_diff",
            "pointwise_to_uniform",
            "tv_to_uniform",
            "chi_statistic",
            "chi_critical",
            "pass",
        ],
        rows,
    )?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

/// Maps a size to a concrete family member with m = Theta(n).
fn family_member(family: &str, n: usize) -> Result<GeneratorSpec, String> {
    if n < 16 {
        return Err("bench sizes must be >= 16".into());
    }
    match family {
        "gnp" => Ok(GeneratorSpec::Gnp { n, p: 4.0 / (n - 1) as f64 }),
        "star" => Ok(GeneratorSpec::Star { leaves: n - 1 }),
        "lollipop" => {
            let clique = (n as f64).sqrt().ceil() as usize;
            Ok(GeneratorSpec::Lollipop { clique_size: clique, path_len: n - clique })
        }
        "complete-bipartite" | "complete_bipartite" => {
            Ok(GeneratorSpec::CompleteBipartite { a: 4, b: n - 4 })
        }
        other => Err(format!("unknown bench family {other}")),
    }
}

fn cmd_bench(cli: &Cli, args: &BenchArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let mut graphs = Vec::with_capacity(args.sizes.len());
    for (i, &n) in args.sizes.iter().enumerate() {
        let spec = family_member(&args.family, n)?;
        let g = generate(&spec, cli.seed.wrapping_add(i as u64))?;
        graphs.push((format!("{}:{n}", args.family), g));
    }
    let records = bench_scaling(&graphs, args.epsilon, args.trials, cli.seed)?;
    let rows: Vec<Vec<Value>> = records
        .iter()
        .map(|r| {
            vec![
                json!(r.graph_id),
                json!(r.n),
                json!(r.m),
                json!(r.epsilon),
                json!(r.mean_queries),
                json!(r.mean_attempts),
                json!(r.predicted_attempts),
                json!(r.nanos_per_sample),
            ]
        })
        .collect();
    let config = json!({
        "family": args.family, "sizes": args.sizes, "epsilon": args.epsilon,
        "trials": args.trials, "seed": cli.seed,
    });
    let graph = json!({ "n": Value::Null, "m": Value::Null, "theta": Value::Null });
    emit_report(
        cli,
        graph,
        config,
        &[
            "graph_id",
            "n",
            "m",
            "epsilon",
            "mean_queries",
            "mean_attempts",
            "predicted_attempts",
            "nanos_per_sample",
        ],
        rows,
    )?;
    Ok(ExitCode::SUCCESS)
}
