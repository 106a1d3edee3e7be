use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_edge-sampling"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn generate_graph(dir: &tempfile::TempDir, family: &str) -> std::path::PathBuf {
    let path = dir.path().join("graph.txt");
    let out = run(&["generate", "--family", family, "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    path
}

#[test]
fn generate_writes_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate_graph(&dir, "star:5");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("6 5"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn generate_is_deterministic_per_seed() {
    let a = run(&["generate", "--family", "gnp:40,0.2", "--seed", "9"]);
    let b = run(&["generate", "--family", "gnp:40,0.2", "--seed", "9"]);
    let c = run(&["generate", "--family", "gnp:40,0.2", "--seed", "10"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn sample_report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate_graph(&dir, "double-star:6");
    let out = run(&[
        "sample",
        "--graph",
        path.to_str().unwrap(),
        "--epsilon",
        "0.25",
        "--count",
        "4",
        "--seed",
        "3",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["graph"]["n"], 14);
    assert_eq!(v["graph"]["m"], 13);
    assert_eq!(v["graph"]["theta"], 6);
    assert_eq!(v["config"]["epsilon"], 0.25);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 4);
    for r in results {
        assert!(r["u"].as_u64().unwrap() < r["v"].as_u64().unwrap());
        assert!(r["attempts"].as_u64().unwrap() >= 1);
        assert!(r["queries"].as_u64().unwrap() >= 1);
    }
}

#[test]
fn exact_sample_dumps_correction_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate_graph(&dir, "double-star:6");
    let corr = dir.path().join("correction.csv");
    let out = run(&[
        "exact-sample",
        "--graph",
        path.to_str().unwrap(),
        "--delta",
        "0.5",
        "--count",
        "2",
        "--dump-correction",
        corr.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&corr).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("v,w,q,r"));
    // One row per directed edge.
    assert_eq!(text.lines().count(), 1 + 2 * 13);
    let mut r_total = 0.0f64;
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let r: f64 = fields[3].parse().unwrap();
        assert!(r >= 0.0);
        r_total += r;
    }
    assert!((r_total - 1.0).abs() < 1e-9);
}

#[test]
fn verify_passes_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate_graph(&dir, "lollipop:6,6");
    let out = run(&["verify", "--graph", path.to_str().unwrap()]);
    let v = stdout_json(&out);
    for r in v["results"].as_array().unwrap() {
        assert_eq!(r["pass"], true);
        assert!(r["max_abs_diff"].as_f64().unwrap() <= 1e-12);
    }
}

#[test]
fn verify_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate_graph(&dir, "double-star:6");
    // An impossible tolerance forces the discrepancy branch.
    let out = run(&[
        "verify",
        "--graph",
        path.to_str().unwrap(),
        "--tolerance",
        "0",
        "--epsilon",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_error_exits_one() {
    let out = run(&["sample", "--graph"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn couple_reports_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate_graph(&dir, "double-star:6");
    let out = run(&[
        "couple",
        "--graph",
        path.to_str().unwrap(),
        "--epsilon",
        "0.5",
        "--k",
        "4",
        "--trials",
        "2000",
    ]);
    let v = stdout_json(&out);
    let r = &v["results"][0];
    let down = r["downstream_divergence"].as_f64().unwrap();
    let stream = r["stream_difference_rate"].as_f64().unwrap();
    assert!(down <= stream + 1e-12);
}

#[test]
fn bench_emits_csv() {
    let out = run(&[
        "bench",
        "--family",
        "gnp",
        "--sizes",
        "64,128",
        "--trials",
        "50",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("graph_id,n,m,epsilon"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn htable_dump_levels() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate_graph(&dir, "double-star:6");
    let ht = dir.path().join("htable.csv");
    let out = run(&[
        "verify",
        "--graph",
        path.to_str().unwrap(),
        "--epsilon",
        "0.25",
        "--dump-htable",
        ht.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&ht).unwrap();
    assert!(text.starts_with("vertex,level,value"));
    // 14 vertices, levels 1..=2 for epsilon 0.25 (ell = 3).
    assert_eq!(text.lines().count(), 1 + 14 * 2);
}
