//! End-to-end runs of the `kcirc` binary.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn graph_file(vertices: &[&str], edges: &[(&str, &str, &str)]) -> NamedTempFile {
    let edges: Vec<Value> = edges
        .iter()
        .map(|(id, u, v)| serde_json::json!({"id": id, "ends": [u, v]}))
        .collect();
    let text = serde_json::json!({"vertices": vertices, "edges": edges}).to_string();
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn complete(n: usize) -> NamedTempFile {
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let ids: Vec<(String, &str, &str)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (format!("{}{}", names[i], names[j]), names[i].as_str(), names[j].as_str()))
        .collect();
    let edges: Vec<(&str, &str, &str)> = ids.iter().map(|(id, u, v)| (id.as_str(), *u, *v)).collect();
    let vertices: Vec<&str> = names.iter().map(String::as_str).collect();
    graph_file(&vertices, &edges)
}

fn triangle() -> NamedTempFile {
    graph_file(&["a", "b", "c"], &[("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a")])
}

fn kcirc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcirc"))
        .args(args)
        .env_remove("KCIRC_MAX_EDGES")
        .output()
        .unwrap()
}

fn on(f: &NamedTempFile, args: &[&str]) -> Output {
    let path = f.path().to_str().unwrap();
    let mut all = args.to_vec();
    all.extend(["--input", path]);
    kcirc(&all)
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_k4() {
    let v = json(&on(&complete(4), &["analyze", "--k", "1"]));
    assert_eq!(v["rank"], 4);
    assert_eq!(v["corank"], 2);
    assert_eq!(v["delta"], 2);
    assert_eq!(v["connected"], true);
    let stars = v["stars"].as_array().unwrap();
    assert_eq!(stars.len(), 4);
    assert!(stars.iter().all(|s| s["status"] == "Tight" && s["cocircuit"] == true));
}

#[test]
fn analyze_triangle_is_trivial() {
    let v = json(&on(&triangle(), &["analyze", "--k", "1"]));
    assert_eq!(v["message"], "M_1 trivial");
    assert_eq!(v["nontrivial"], false);
    assert!(v.get("stars").is_none());
}

#[test]
fn parse_errors_exit_2() {
    let empty = NamedTempFile::new().unwrap();
    assert_eq!(on(&empty, &["analyze", "--k", "1"]).status.code(), Some(2));
    let mut bad = NamedTempFile::new().unwrap();
    bad.write_all(b"{\"vertices\": [\"a\"], \"edges\": [{\"id\": \"e\", \"ends\": [\"a\", \"q\"]}]}")
        .unwrap();
    let out = on(&bad, &["analyze", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let missing = kcirc(&["analyze", "--k", "1", "--input", "/nonexistent/graph.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn infeasible_k_exits_3() {
    let k4 = complete(4);
    assert_eq!(on(&k4, &["analyze", "--k", "-1"]).status.code(), Some(3));
    assert_eq!(on(&k4, &["certify", "--k", "0"]).status.code(), Some(3));
    assert_eq!(on(&k4, &["enumerate", "nonsep", "--k", "0"]).status.code(), Some(3));
}

#[test]
fn enumerate_families() {
    let k4 = complete(4);
    let c = json(&on(&k4, &["enumerate", "circuits", "--k", "1"]));
    assert_eq!(c["count"], 6);
    assert!(c["sets"].as_array().unwrap().iter().all(|s| s.as_array().unwrap().len() == 5));
    assert_eq!(c["predicate_matches_oracle"], true);
    let b = json(&on(&k4, &["enumerate", "bases", "--k", "1"]));
    assert_eq!(b["count"], 15);
    assert_eq!(b["predicate_matches_oracle"], true);
    let co = json(&on(&k4, &["enumerate", "cocircuits", "--k", "1"]));
    assert_eq!(co["predicate_matches_oracle"], true);
    let n = json(&on(&complete(5), &["enumerate", "nonsep", "--k", "1"]));
    assert_eq!(n["count"], 5);
    assert_eq!(n["predicate_matches_oracle"], true);
}

#[test]
fn enumeration_limit_exits_4() {
    let k4 = complete(4);
    assert_eq!(on(&k4, &["enumerate", "circuits", "--k", "1", "--max-edges", "5"]).status.code(), Some(4));
    let out = Command::new(env!("CARGO_BIN_EXE_kcirc"))
        .args(["enumerate", "circuits", "--k", "1", "--input", k4.path().to_str().unwrap()])
        .env("KCIRC_MAX_EDGES", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn certify_verdicts() {
    let k5 = json(&on(&complete(5), &["certify", "--k", "1"]));
    assert_eq!(k5["verdict"], "certified");
    assert_eq!(k5["theorem"], "three-connected-all-small");

    let k4 = complete(4);
    let big = json(&on(&k4, &["certify", "--k", "2"]));
    assert_eq!(big["verdict"], "unknown");

    let searched = json(&on(&k4, &["certify", "--search", "--k", "1"]));
    assert_eq!(searched["verdict"], "not_unique");
    assert_eq!(searched["search_complete"], true);
    assert_eq!(searched["counterexample"]["edges"].as_array().unwrap().len(), 6);
}

#[test]
fn certify_needs_connected_matroid() {
    assert_eq!(on(&triangle(), &["certify", "--k", "1"]).status.code(), Some(5));
}

#[test]
fn dot_colors_by_status() {
    let out = on(&complete(4), &["analyze", "--k", "1", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph G {"));
    assert_eq!(text.matches("fillcolor=gold").count(), 4);
    assert_eq!(text.matches(" -- ").count(), 6);
}

#[test]
fn text_mirrors_json() {
    let k4 = complete(4);
    let v = json(&on(&k4, &["analyze", "--k", "1"]));
    let text = String::from_utf8(on(&k4, &["analyze", "--k", "1", "--format", "text"]).stdout).unwrap();
    for key in v.as_object().unwrap().keys() {
        assert!(text.lines().any(|l| l.starts_with(&format!("{key}:"))), "{key}");
    }
}

#[test]
fn output_is_deterministic() {
    let k4 = complete(4);
    for args in [
        &["analyze", "--k", "1"][..],
        &["enumerate", "cocircuits", "--k", "1"],
        &["certify", "--search", "--k", "1"],
    ] {
        assert_eq!(on(&k4, args).stdout, on(&k4, args).stdout);
    }
}

#[test]
fn corpus_runs() {
    let out = kcirc(&["corpus", "--max-edges", "4"]);
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
    assert_eq!(kcirc(&["corpus", "--max-edges", "4", "--random", "20", "--seed", "3"]).status.code(), Some(0));
}

#[test]
fn corpus_catches_injected_mutant() {
    let out = kcirc(&["corpus", "--max-edges", "4", "--inject-mutant"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    let failing = v["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["failures"] != 0)
        .unwrap();
    assert!(failing["first_failure"]["graph"]["edges"].is_array());
}
