use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bcongest"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bcongest-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_graph(name: &str, n: usize, edges: &[(u64, u64)]) -> PathBuf {
    let mut s = format!("{n} {}\n", edges.len());
    for (u, v) in edges {
        s += &format!("{u} {v}\n");
    }
    let p = scratch(name);
    fs::write(&p, s).unwrap();
    p
}

fn run(args: &[&str]) -> (Output, Option<Value>) {
    let out = bin().args(args).output().unwrap();
    let json = serde_json::from_slice(&out.stdout).ok();
    (out, json)
}

fn cycle(n: u64) -> Vec<(u64, u64)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

#[test]
fn detect_cycle_with_check() {
    let g = write_graph("c5.txt", 5, &cycle(5));
    let (out, j) = run(&["detect", "--graph", g.to_str().unwrap(), "--target", "cycle", "--k", "5", "--check"]);
    assert!(out.status.success());
    let j = j.unwrap();
    assert_eq!(j["result"]["found"], true);
    assert_eq!(j["oracle_agreement"], true);
    assert_eq!(j["graph"]["n"], 5);
    assert!(j["metrics"]["rounds_used"].as_u64().unwrap() <= j["metrics"]["budget"].as_u64().unwrap());
}

#[test]
fn detect_on_a_tree_finds_no_cycle() {
    let g = write_graph("tree.txt", 5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
    let (out, j) = run(&["detect", "--graph", g.to_str().unwrap(), "--target", "cycle", "--k", "4"]);
    assert!(out.status.success());
    let j = j.unwrap();
    assert_eq!(j["result"]["found"], false);
    assert!(j.get("oracle_agreement").is_none());
}

#[test]
fn detect_path_conventions_and_tree_targets() {
    let g = write_graph("p4.txt", 4, &[(0, 1), (1, 2), (2, 3)]);
    let gs = g.to_str().unwrap();
    let (_, e) = run(&["detect", "--graph", gs, "--target", "path", "--k", "3", "--check"]);
    let (_, n) = run(&["detect", "--graph", gs, "--target", "path", "--k", "4", "--convention", "nodes", "--check"]);
    let (e, n) = (e.unwrap(), n.unwrap());
    assert_eq!(e["result"]["found_nodes"], serde_json::json!([0, 3]));
    assert_eq!(e["result"], n["result"]);
    assert_eq!(n["config"]["convention"], "nodes");

    let star = write_graph("star.txt", 4, &[(0, 1), (0, 2), (0, 3)]);
    let (out, j) = run(&["detect", "--graph", gs, "--target", "tree", star.to_str().unwrap(), "--check"]);
    assert!(out.status.success());
    assert_eq!(j.unwrap()["result"]["found"], false);

    let tri_tail = write_graph("pt.txt", 4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
    let host = write_graph("host.txt", 5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]);
    let (out, j) = run(&[
        "detect",
        "--graph",
        host.to_str().unwrap(),
        "--target",
        "pseudotree",
        tri_tail.to_str().unwrap(),
        "--check",
    ]);
    assert!(out.status.success());
    let j = j.unwrap();
    assert_eq!(j["result"]["found"], true);
    assert_eq!(j["oracle_agreement"], true);
}

#[test]
fn anchored_cycle_detection() {
    let g = write_graph("c6.txt", 6, &cycle(6));
    let (out, j) = run(&[
        "detect", "--graph", g.to_str().unwrap(), "--target", "cycle", "--k", "6", "--anchor", "0", "--check",
    ]);
    assert!(out.status.success());
    assert_eq!(j.unwrap()["result"]["found_nodes"], serde_json::json!([1, 5]));
}

#[test]
fn enumerate_cliques_and_cycles() {
    let k4 = write_graph("k4.txt", 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let (out, j) = run(&["enumerate", "--graph", k4.to_str().unwrap(), "--target", "clique", "3", "--check"]);
    assert!(out.status.success());
    let j = j.unwrap();
    assert_eq!(j["result"]["copy_count"], 4);
    assert_eq!(j["oracle_agreement"], true);

    let petersen = write_graph(
        "petersen.txt",
        10,
        &[
            (0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),
        ],
    );
    let (out, j) = run(&["enumerate", "--graph", petersen.to_str().unwrap(), "--target", "c5", "--check"]);
    assert!(out.status.success());
    assert_eq!(j.unwrap()["result"]["copy_count"], 12);
}

#[test]
fn supported_enumeration() {
    let k5: Vec<(u64, u64)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
    let sup = write_graph("k5.txt", 5, &k5);
    let sub = write_graph("sub.txt", 5, &[(0, 1), (1, 2), (2, 3), (0, 3), (3, 4)]);
    let (out, j) = run(&[
        "enumerate",
        "--graph",
        sub.to_str().unwrap(),
        "--support",
        sup.to_str().unwrap(),
        "--model",
        "supported",
        "--target",
        "c4",
        "--check",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let j = j.unwrap();
    assert_eq!(j["result"]["copy_count"], 1);
    assert_eq!(j["metrics"]["within_budget"], true);

    let (out, _) = run(&["enumerate", "--graph", sub.to_str().unwrap(), "--model", "supported", "--target", "c4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn genlb_examples() {
    let (out, j) = run(&["genlb", "--k", "6", "--N", "2", "--A", "1", "--B", "1", "--verify"]);
    assert!(out.status.success());
    let j = j.unwrap();
    let props = j["verification"]["properties"].as_array().unwrap();
    assert_eq!(props.len(), 5);
    assert!(props.iter().all(|p| p["passed"] == true));
    assert!(!j["verification"]["cycle"].is_null());

    let prefix = scratch("lb8");
    let (out, j) = run(&[
        "genlb", "--k", "8", "--N", "5", "--A", "1", "--B", "2", "--verify", "--out", prefix.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let j = j.unwrap();
    assert!(j["nodes"].as_u64().unwrap() <= 120);
    assert!(j["verification"]["cycle"].is_null());
    let graph = fs::read_to_string(prefix.with_extension("txt")).unwrap();
    assert!(graph.starts_with(&format!("{} ", j["nodes"])));
    let meta: Value = serde_json::from_str(&fs::read_to_string(prefix.with_extension("json")).unwrap()).unwrap();
    assert_eq!(meta["cut_edges"].as_array().unwrap().len(), 10);

    let (out, _) = run(&["genlb", "--k", "5", "--N", "2", "--A", "1", "--B", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k >= 6"));

    let (out, j) = run(&["genlb", "--k", "7", "--N", "2", "--random-intersecting", "--seed", "3", "--detect"]);
    assert!(out.status.success());
    assert_eq!(j.unwrap()["detection"]["found"], true);
}

#[test]
fn bench_csv_is_deterministic() {
    let args = ["bench", "--suite", "paths", "--sizes", "20,30", "--seeds", "1,2", "--k", "3"];
    let a = bin().args(args).output().unwrap();
    let b = bin().args(args).arg("--threads").arg("1").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,m,d,k,target,model,rounds,budget,max_bits,total_bits,agreement"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.ends_with(",true") && r.split(',').count() == 11));
}

#[test]
fn bad_flags_fail() {
    let g = write_graph("bad.txt", 3, &[(0, 1)]);
    let (out, _) = run(&["detect", "--graph", g.to_str().unwrap(), "--target", "path"]);
    assert_eq!(out.status.code(), Some(2));
    let (out, _) = run(&["detect", "--graph", "/nonexistent/graph.txt", "--target", "path", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let (out, _) = run(&["enumerate", "--graph", g.to_str().unwrap(), "--target", "c6"]);
    assert_eq!(out.status.code(), Some(2));
}
