use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn plap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plap"))
        .args(args)
        .env_remove("PLAP_THREADS")
        .output()
        .expect("binary runs")
}

fn plap_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_plap"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_graph(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let path = path.to_str().unwrap().to_string();
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let out = plap(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn verify_all_on_star_passes() {
    let dir = tempfile::tempdir().unwrap();
    let star = write_graph(dir.path(), "star.json", &["star", "5"]);
    let out = plap(&["verify", "all", &star, "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report = json(&out);
    assert_eq!(report["status"], "pass");
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["anchor"].as_str().is_some_and(|a| !a.is_empty())));
    assert!(checks.iter().any(|c| c["name"] == "limit.distance-non-increasing" && c["status"] == "pass"));
}

#[test]
fn malformed_json_exits_two_with_offset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, b"{\"n\": 3, \"edges\": [").unwrap();
    let out = plap(&["spectrum", path.to_str().unwrap(), "--p", "3", "--which", "largest"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("byte 18"), "{err}");
}

#[test]
fn invalid_graph_exits_two() {
    let out = plap_stdin(&["validate", "-"], br#"{"n": 2, "edges": [{"u": 0, "v": 0}]}"#);
    assert_eq!(out.status.code(), Some(2));
    let out = plap_stdin(&["validate", "-"], br#"{"n": 2, "edges": [{"u": 0, "v": 1, "w": -1}]}"#);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cutoff_on_triangle() {
    let out = plap_stdin(
        &["cutoff", "-", "--k", "all", "--exact"],
        br#"{"n": 3, "edges": [{"u": 0, "v": 1}, {"u": 1, "v": 2}, {"u": 0, "v": 2}]}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let want = [0.0, 0.5, std::f64::consts::SQRT_2 / 2.0];
    let brackets = report["values"]["brackets"].as_array().unwrap();
    assert_eq!(brackets.len(), 3);
    for (b, w) in brackets.iter().zip(want) {
        assert!((b["lower"].as_f64().unwrap() - w).abs() < 1e-9);
        assert!((b["upper"].as_f64().unwrap() - w).abs() < 1e-9);
        assert_eq!(b["exact"], true);
    }
}

#[test]
fn cutoff_exact_fails_on_open_bracket() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write_graph(dir.path(), "neg.json", &["complete", "3", "--negative"]);
    let out = plap(&["cutoff", &tri, "--k", "2", "--exact"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let check = report["checks"].as_array().unwrap().iter().find(|c| c["name"] == "cutoff.exact").unwrap();
    assert_eq!(check["status"], "fail");
    assert_eq!(check["witnesses"]["open_indices"], serde_json::json!([2]));
    let out = plap(&["cutoff", &tri, "--k", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_families() {
    let k4 = json(&plap(&["generate", "complete", "4"]));
    assert_eq!(k4["n"], 4);
    assert_eq!(k4["edges"].as_array().unwrap().len(), 6);
    let star = json(&plap(&["generate", "star", "5"]));
    assert_eq!(star["n"], 5);
    let edges = star["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 4);
    assert!(edges.iter().all(|e| e["u"] == 0));
    let neg = json(&plap(&["generate", "cycle", "5", "--negative"]));
    assert!(neg["edges"].as_array().unwrap().iter().all(|e| e["sigma"] == -1));
    assert_eq!(plap(&["generate", "complete", "0"]).status.code(), Some(2));
}

#[test]
fn generate_random_is_deterministic() {
    let args = ["generate", "random", "6", "--prob", "0.5", "--seed", "7", "--signs", "random"];
    let a = plap(&args);
    let b = plap(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = plap(&["generate", "random", "6", "--prob", "0.5", "--seed", "8", "--signs", "random"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(
        dir.path(),
        "g.json",
        &["random", "6", "--seed", "3", "--signs", "antibalanced", "--connected", "--weighted"],
    );
    let a = plap(&["verify", "monotonicity", &g, "--seed", "5"]);
    let b = plap(&["verify", "monotonicity", &g, "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 5);
}

#[test]
fn stdin_matches_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "p.json", &["path", "4"]);
    let bytes = std::fs::read(&g).unwrap();
    let from_file = json(&plap(&["validate", &g]));
    let from_stdin = json(&plap_stdin(&["validate", "-"], &bytes));
    assert_eq!(from_file["input_sha256"], from_stdin["input_sha256"]);
    assert_eq!(from_file["values"], from_stdin["values"]);
    assert_eq!(from_file["values"]["balance"], "both");
}

#[test]
fn spectrum_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "k4.json", &["complete", "4"]);
    let csv = dir.path().join("grid.csv");
    let out = plap(&["spectrum", &g, "--p", "2", "--grid", "3,4", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,lambda,residual,m1,m2"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    assert!((rows[0][1] - 4.0).abs() < 1e-9);
    let pairs = json(&out)["values"]["pairs"].as_array().unwrap().len();
    assert_eq!(pairs, 3);
}

#[test]
fn bounds_inertia_passes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "c5.json", &["cycle", "5"]);
    let out = plap(&["bounds", &g, "--inertia", "--all-signatures"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report = json(&out);
    assert_eq!(report["values"]["inertia"]["alpha"], 2);
    assert_eq!(report["values"]["inertia"]["beta"], 3);
}

#[test]
fn bad_thread_count_exits_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_plap"))
        .args(["generate", "path", "3"])
        .env("PLAP_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_two() {
    assert_eq!(plap(&["frobnicate"]).status.code(), Some(2));
}
