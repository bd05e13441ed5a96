use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const FIVE_NODE: &str = "# five-node example\n0 1\n0 2\n1 0\n1 2\n1 3\n1 4\n2 1\n2 3\n3 0\n3 1\n3 2\n4 1\n4 2\n";

fn ppr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppr")).args(args).output().unwrap()
}

fn graph_file(dir: &Path) -> PathBuf {
    let path = dir.join("g.txt");
    fs::write(&path, FIVE_NODE).unwrap();
    path
}

fn parse_csv(text: &str) -> Vec<f64> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("node,ppr"));
    lines
        .enumerate()
        .map(|(i, l)| {
            let (node, val) = l.split_once(',').unwrap();
            assert_eq!(node.parse::<usize>().unwrap(), i);
            val.parse().unwrap()
        })
        .collect()
}

#[test]
fn powerpush_query_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph_file(dir.path());
    let out = dir.path().join("r.csv");
    let res = ppr(&["query", "--graph", g.to_str().unwrap(), "--algo", "powerpush", "--source", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let values = parse_csv(&fs::read_to_string(&out).unwrap());
    let exact = [227.0 / 773.0, 210.0 / 773.0, 180.0 / 773.0, 114.0 / 773.0, 42.0 / 773.0];
    assert_eq!(values.len(), 5);
    let l1: f64 = values.iter().zip(exact).map(|(a, b)| (a - b).abs()).sum();
    assert!(l1 <= 1e-8);
}

#[test]
fn speedppr_without_epsilon_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph_file(dir.path());
    let res = ppr(&["query", "--graph", g.to_str().unwrap(), "--algo", "speedppr", "--source", "0"]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("epsilon"));
}

#[test]
fn usage_and_data_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph_file(dir.path());
    let g = g.to_str().unwrap();
    assert_eq!(ppr(&["query", "--source", "0"]).status.code(), Some(1));
    assert_eq!(ppr(&["query", "--graph", g, "--algo", "bepi", "--source", "0"]).status.code(), Some(1));
    assert_eq!(ppr(&["query", "--graph", g, "--source", "7"]).status.code(), Some(2));
    assert_eq!(ppr(&["query", "--graph", g, "--source", "0", "--alpha", "1.5"]).status.code(), Some(2));
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "0 1\n1 x\n").unwrap();
    let res = ppr(&["query", "--graph", bad.to_str().unwrap(), "--source", "0"]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 2"));
    assert_eq!(ppr(&["--help"]).status.code(), Some(0));
}

#[test]
fn build_index_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph_file(dir.path());
    let a = dir.path().join("a.idx");
    let b = dir.path().join("b.idx");
    for out in [&a, &b] {
        let res = ppr(&["build-index", "--graph", g.to_str().unwrap(), "--alpha", "0.2", "--seed", "42", "--out", out.to_str().unwrap()]);
        assert_eq!(res.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn index_with_other_alpha_or_graph_is_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph_file(dir.path());
    let g = g.to_str().unwrap();
    let idx = dir.path().join("g.idx");
    let idx = idx.to_str().unwrap();
    assert_eq!(ppr(&["build-index", "--graph", g, "--alpha", "0.3", "--out", idx]).status.code(), Some(0));
    let query = |graph: &str| ppr(&["query", "--graph", graph, "--algo", "speedppr", "--epsilon", "0.1", "--source", "0", "--index", idx]);
    assert_eq!(query(g).status.code(), Some(2));

    let other = dir.path().join("other.txt");
    fs::write(&other, "0 1\n1 2\n2 0\n").unwrap();
    assert_eq!(query(other.to_str().unwrap()).status.code(), Some(2));
}

#[test]
fn identical_argv_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph_file(dir.path());
    let g = g.to_str().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let res = ppr(&["query", "--graph", g, "--algo", "speedppr", "--epsilon", "0.3", "--random-sources", "3", "--seed", "5", "--out", out.to_str().unwrap()]);
        assert_eq!(res.status.code(), Some(0));
        let mut files: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        files.iter().map(|p| (p.file_name().unwrap().to_owned(), fs::read(p).unwrap())).collect::<Vec<_>>()
    };
    let a = run("a");
    assert!(!a.is_empty());
    assert_eq!(a, run("b"));
}

#[test]
fn clean_cache_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph_file(dir.path());
    let cache = dir.path().join("g.bin");
    assert_eq!(ppr(&["clean", "--graph", g.to_str().unwrap(), "--out", cache.to_str().unwrap()]).status.code(), Some(0));
    let from_text = ppr(&["query", "--graph", g.to_str().unwrap(), "--source", "2"]);
    let from_cache = ppr(&["query", "--graph", cache.to_str().unwrap(), "--source", "2"]);
    assert_eq!(from_text.status.code(), Some(0));
    assert_eq!(from_text.stdout, from_cache.stdout);
}

#[test]
fn groundtruth_round_trips_doubles() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph_file(dir.path());
    let res = ppr(&["groundtruth", "--graph", g.to_str().unwrap(), "--source", "0"]);
    assert_eq!(res.status.code(), Some(0));
    let text = String::from_utf8(res.stdout).unwrap();
    let values = parse_csv(&text);
    // re-serializing the parsed values reproduces the same text
    let again: String = std::iter::once("node,ppr".to_string())
        .chain(values.iter().enumerate().map(|(i, v)| format!("{i},{v:.16e}")))
        .map(|l| l + "\n")
        .collect();
    assert_eq!(text, again);
    assert!((values.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn bench_writes_summary_and_checkpoints() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph_file(dir.path());
    let out = dir.path().join("bench");
    let res = ppr(&[
        "bench", "--graph", g.to_str().unwrap(), "--algo", "powitr,powerpush,speedppr",
        "--lambda", "1e-4,1e-8", "--epsilon", "0.5", "--source", "1", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let summary = fs::read_to_string(out.join("g_sweep.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 2 + 2 + 1);
    assert!(out.join("g_powerpush_1e-8_s1.csv").exists());
    assert!(out.join("g_powitr_1e-4_s1.csv").exists());
}
