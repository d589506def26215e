use std::path::{Path, PathBuf};

use mecip::cli::run_with;

fn network(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("networks").join(format!("{name}.bif")).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("mecip").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sample_is_reproducible_and_headed() {
    let asia = network("asia");
    let (code, a, _) = run(&["sample", &asia, "-n", "50", "--seed", "3"]);
    assert_eq!(code, 0);
    let (_, b, _) = run(&["sample", &asia, "-n", "50", "--seed", "3"]);
    assert_eq!(a, b);
    let (_, c, _) = run(&["sample", &asia, "-n", "50", "--seed", "4"]);
    assert_ne!(a, c);
    let mut lines = a.lines();
    assert!(lines.next().unwrap().starts_with('#') && a.contains("seed=3"));
    assert_eq!(lines.next().unwrap().split(',').count(), 8);
    assert_eq!(a.lines().count(), 52);
}

#[test]
fn learn_then_eval() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("asia.csv");
    let edges = dir.path().join("asia.edges");
    let asia = network("asia");
    assert_eq!(run(&["sample", &asia, "-n", "5000", "--seed", "1", "--out", s(&data)]).0, 0);
    for algo in ["mecip", "hc"] {
        let (code, _, err) = run(&["learn", s(&data), "--algo", algo, "--out", s(&edges)]);
        assert_eq!(code, 0, "{err}");
        let text = std::fs::read_to_string(&edges).unwrap();
        assert!(text.starts_with("# mecip learn") && text.contains("seed=0") && text.contains(&format!("algo={algo}")));
        let (code, report, _) = run(&["eval", "--truth", &asia, "--learned", s(&edges)]);
        assert_eq!(code, 0);
        assert!(report.contains("missing_pct:") && report.contains("true_edges: 8"));
    }
}

#[test]
fn gen_writes_parseable_network() {
    let (code, text, _) = run(&["gen", "--nodes", "6", "--max-indeg", "2", "--max-states", "3", "--strength", "1", "--seed", "9"]);
    assert_eq!(code, 0);
    assert!(text.contains("dirichlet_alpha=0.5") && text.contains("seed=9"));
    let net = mecip::network::parse_bif(&text).unwrap();
    assert_eq!(net.n_nodes(), 6);
    assert_eq!(run(&["gen", "--nodes", "6", "--max-indeg", "2", "--max-states", "3", "--strength", "1", "--seed", "9"]).1, text);
}

#[test]
fn benchmark_streams_records_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.txt");
    let out = dir.path().join("out.csv");
    std::fs::write(&spec, format!("# cells\n{} 500 mecip,hc\n5,2,2,1 300 mecip\n", network("asia"))).unwrap();
    let (code, table, err) = run(&["benchmark", "--spec", s(&spec), "--replicates", "2", "--out", s(&out)]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("# mecip benchmark"));
    let records = mecip::bench::parse_records(&csv).unwrap();
    assert_eq!(records.len(), 6);
    assert!(table.contains("asia") && table.contains("(5 2 2 1)"));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.csv");
    assert_eq!(run(&["learn", s(&missing)]).0, 2);
    assert_eq!(run(&["sample", &network("asia"), "-n", "0"]).0, 2);
    assert_eq!(run(&["gen", "--nodes", "4", "--max-indeg", "2", "--max-states", "2", "--strength", "0"]).0, 2);
    assert_eq!(run(&["learn", s(&missing), "--algo", "pc"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    let bad = dir.path().join("bad.bif");
    std::fs::write(&bad, "variable A {\n  type discrete [ 2 ] { a, b };\n}\nprobability ( A ) {\n  table 0.5;\n}\n").unwrap();
    let (code, _, err) = run(&["sample", s(&bad), "-n", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("error"));
    let spec = dir.path().join("spec.txt");
    std::fs::write(&spec, "asia.bif many mecip\n").unwrap();
    assert_eq!(run(&["benchmark", "--spec", s(&spec)]).0, 2);
    let edges = dir.path().join("e.txt");
    std::fs::write(&edges, "X -> Y\n").unwrap();
    assert_eq!(run(&["eval", "--truth", &network("asia"), "--learned", s(&edges)]).0, 2);
}
