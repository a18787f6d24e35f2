use std::path::Path;
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use serde_json::Value;

fn steiner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steiner")).args(args).output().expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("NDJSON line")).collect()
}

/// Drops wall-clock fields so reruns can be compared.
fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for key in ["started", "wall_ms", "timings"] {
                map.remove(key);
            }
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn graham_pollak_through_the_cli() {
    let out = steiner(&["verify", "graham-pollak", "--max-n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let records = lines(&out);
    let six: Vec<_> = records.iter().filter(|r| r["evidence"]["n"] == 6).collect();
    assert_eq!(six.len(), 6);
    assert!(six.iter().all(|r| r["evidence"]["det"] == "-80"));
    let summary = records.last().unwrap();
    assert_eq!(summary["summary"]["status"], "verified");
    assert_eq!(summary["manifest"]["command"]["subject"]["max_n"], 6);
}

#[test]
fn odd_parity_gives_zero_certificates() {
    let out = steiner(&["verify", "parity", "--k", "3", "--n", "4", "--no-cache"]);
    assert_eq!(out.status.code(), Some(0));
    let records = lines(&out);
    assert_eq!(records.len(), 3);
    assert!(records[..2].iter().all(|r| r["evidence"]["outcome"]["mode"] == "zero-certificate"));
}

#[test]
fn conjecture_exact_small() {
    let out = steiner(&["conjecture", "--k", "4", "--n", "4", "--mode", "exact", "--no-cache"]);
    assert_eq!(out.status.code(), Some(0));
    let records = lines(&out);
    assert_eq!(records.len(), 3);
    assert_eq!(records[0]["evidence"]["resultant"]["value"], records[1]["evidence"]["resultant"]["value"]);
}

#[test]
fn exit_codes() {
    assert_eq!(steiner(&["verify", "parity", "--bogus"]).status.code(), Some(2));
    assert_eq!(steiner(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(steiner(&["factor", "0"]).status.code(), Some(2));
    assert_eq!(steiner(&["conjecture", "--k", "4", "--n", "4", "--mode", "witness"]).status.code(), Some(2));
    let out = steiner(&["resultant", "--n", "6", "--k", "6", "--mode", "exact", "--no-cache"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(k=6, n<=4)"));
    let out = steiner(&["nullvector", "--tree", "Ch", "--k", "4", "--restarts", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(lines(&out)[0]["evidence"]["conclusion"], "none");
}

#[test]
fn factor_and_tables() {
    let out = steiner(&["factor", "-114688"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["factored"], "-2^14*7");
    let out = steiner(&["compare-table", "--k", "4", "--n", "2", "--no-cache"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["evidence"]["computed"], "-28");
    let out = steiner(&["compare-table", "--k", "2", "--n", "4", "--table-index", "kn"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tree_inputs_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("star.txt");
    std::fs::write(&file, "n 4\n0 1\n0 2\n0 3\n").unwrap();
    let out = steiner(&["steiner", "--tree", file.to_str().unwrap(), "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let record = &lines(&out)[0];
    assert_eq!(record["hypermatrix"]["entries"].as_array().unwrap().len(), 20);
    let out = steiner(&["trees", "--n", "5", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("code,edges,graph6,n"));
}

#[test]
fn exact_reruns_are_identical() {
    let args = ["resultant", "--n", "4", "--k", "4", "--mode", "exact", "--no-cache"];
    let mut runs: Vec<Vec<Value>> = (0..2).map(|_| lines(&steiner(&args))).collect();
    runs.iter_mut().flatten().for_each(strip_timing);
    let text: Vec<String> = runs.iter().map(|r| r.iter().map(Value::to_string).collect::<Vec<_>>().join("\n")).collect();
    assert_eq!(text[0], text[1]);
}

fn prufer_graph6(rng: &mut impl Rng, n: usize) -> String {
    let seq: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(0..n)).collect();
    let tree = steiner_core::Tree::from_prufer(&seq, n).unwrap();
    steiner_core::tree::Graph6::to_graph6(&tree)
}

/// Outcome of the single record and the run's cache hit count.
fn outcome(args: &[&str], cache: Option<&Path>) -> (Value, u64) {
    let mut full: Vec<&str> = args.to_vec();
    let dir;
    match cache {
        Some(path) => {
            dir = path.to_str().unwrap().to_string();
            full.extend(["--cache-dir", &dir]);
        }
        None => full.push("--no-cache"),
    }
    let out = steiner(&full);
    assert_eq!(out.status.code(), Some(0), "{full:?}: {}", String::from_utf8_lossy(&out.stderr));
    let mut records = lines(&out);
    let hits = records[1]["manifest"]["cache"]["hits"].as_u64().unwrap_or(0);
    let mut value = records.remove(0)["evidence"]["outcome"].take();
    strip_timing(&mut value);
    (value, hits)
}

#[test]
fn cached_outcomes_match_fresh_ones() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let cases = [(2, 3), (2, 4), (2, 6), (2, 8), (3, 2), (3, 3), (3, 4), (3, 5), (3, 8), (4, 2), (4, 3), (4, 4), (4, 6)];
    for _ in 0..20 {
        let (n, k) = cases[rng.gen_range(0..cases.len())];
        let g6 = prufer_graph6(&mut rng, n);
        let mode = if k % 2 == 1 && n >= 3 { "zero-certify" } else { "exact" };
        let ks = k.to_string();
        let args = ["resultant", "--tree", &g6, "--k", &ks, "--mode", mode];
        let (first, _) = outcome(&args, Some(dir.path()));
        let (cached, hits) = outcome(&args, Some(dir.path()));
        let (fresh, _) = outcome(&args, None);
        assert_eq!(hits, 1, "{args:?}");
        assert_eq!(first, cached, "{args:?}");
        assert_eq!(cached, fresh, "{args:?}");
    }
}

