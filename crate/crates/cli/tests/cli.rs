use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rac1_core::drawing::{exact, Drawing, Edge};
use rac1_core::geom::Point;
use serde_json::Value;
use tempfile::TempDir;

fn rac1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rac1")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, d: &Drawing) -> String {
    let path = dir.path().join(name);
    fs::write(&path, d.to_json()).unwrap();
    path.to_str().unwrap().to_string()
}

fn x_pair(dx: i64) -> Drawing {
    let mut d = Drawing::new(1);
    d.add_vertex("a", exact(0, 0))
        .add_vertex("b", exact(2, 2))
        .add_vertex("c", exact(0, 2))
        .add_vertex("d", exact(dx, 0));
    d.add_edge(Edge::new("ab", "a", "b"));
    d.add_edge(Edge::new("cd", "c", "d"));
    d
}

fn square() -> Drawing {
    let mut d = Drawing::new(1);
    d.add_vertex("a", exact(0, 0))
        .add_vertex("b", exact(2, 0))
        .add_vertex("c", exact(2, 2))
        .add_vertex("d", exact(0, 2));
    for (id, s, t) in [("ab", "a", "b"), ("bc", "b", "c"), ("cd", "c", "d"), ("da", "d", "a")] {
        d.add_edge(Edge::new(id, s, t));
    }
    d
}

fn generated(dir: &TempDir, levels: &str) -> String {
    let path = dir.path().join(format!("g{levels}.json"));
    let out = rac1(&["generate", "--levels", levels, "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    path.to_str().unwrap().to_string()
}

#[test]
fn generate_prints_drawing_without_out() {
    let out = rac1(&["generate", "--levels", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let d = Drawing::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(d.vertices.len(), 20);
    assert_eq!(d.edges.len(), 90);
}

#[test]
fn generate_writes_files_and_reports() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("g.json");
    let svg = dir.path().join("g.svg");
    let out = rac1(&[
        "generate",
        "--levels",
        "2",
        "--out",
        path.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["n"], 35);
    assert_eq!(r["m"], 165);
    assert_eq!(r["matches_5n_minus_10"], true);
    assert_eq!(r["is_rac"], true);
    assert!(Drawing::from_json(&fs::read_to_string(&path).unwrap()).is_ok());
    assert!(fs::read_to_string(&svg).unwrap().contains("<svg"));
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", &x_pair(2));
    let out = rac1(&["validate", &good]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["is_rac"], true);
    assert_eq!(r["crossing_count"], 1);

    let bad = write(&dir, "bad.json", &x_pair(3));
    let out = rac1(&["validate", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["is_rac"], false);

    let missing = dir.path().join("nope.json");
    assert_eq!(rac1(&["validate", missing.to_str().unwrap()]).status.code(), Some(2));

    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "{ not json").unwrap();
    let out = rac1(&["validate", garbage.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn epsilon_is_a_global_flag() {
    let dir = TempDir::new().unwrap();
    let mut d = Drawing::new(1);
    d.add_vertex("a", Point::float(0.0, 0.0))
        .add_vertex("b", Point::float(2.0, 2.0))
        .add_vertex("c", Point::float(0.0, 2.0))
        .add_vertex("d", Point::float(3.0, 0.0));
    d.add_edge(Edge::new("ab", "a", "b"));
    d.add_edge(Edge::new("cd", "c", "d"));
    let bad = write(&dir, "bad.json", &d);
    // normalized dot product of (1, 1) and (3, -2) is 1/√26
    assert_eq!(rac1(&["--epsilon", "0.5", "validate", &bad]).status.code(), Some(0));
    assert_eq!(rac1(&["validate", &bad, "--epsilon", "1e-12"]).status.code(), Some(1));
    // exact crossings must be exactly perpendicular
    let exact_bad = write(&dir, "exact.json", &x_pair(3));
    assert_eq!(rac1(&["--epsilon", "0.5", "validate", &exact_bad]).status.code(), Some(1));
}

#[test]
fn planarize_scopes() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "x.json", &x_pair(2));
    let out = rac1(&["planarize", &path, "--scope", "crossed"]);
    assert_eq!(out.status.code(), Some(0));
    let p = json(&out);
    assert_eq!(p["nodes"].as_array().unwrap().len(), 5);
    assert_eq!(p["arcs"].as_array().unwrap().len(), 4);
    assert_eq!(p["faces"].as_array().unwrap().len(), 1);
    let dummies: Vec<&Value> = p["nodes"].as_array().unwrap().iter().filter(|n| n["kind"] == "dummy").collect();
    assert_eq!(dummies.len(), 1);
    assert_eq!(dummies[0]["degree"], 4);

    let out = rac1(&["planarize", &path, "--scope", "crossing-free"]);
    let p = json(&out);
    assert_eq!(p["arcs"].as_array().unwrap().len(), 0);
    assert_eq!(rac1(&["planarize", &path, "--scope", "sideways"]).status.code(), Some(2));
}

#[test]
fn stats_of_square_and_triangle() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "sq.json", &square());
    let out = rac1(&["stats", &path]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let faces = r["faces"].as_array().unwrap();
    assert_eq!(faces.len(), 2);
    for f in faces {
        assert_eq!((f["d"].as_u64(), f["l"].as_u64(), f["m"].as_u64()), (Some(4), Some(4), Some(0)));
        assert_eq!((f["i"].as_u64(), f["b"].as_u64()), (Some(0), Some(1)));
        // one face touches all four crossing-free edges
        assert_eq!(f["good"], false);
    }
    assert!(r["notes"].is_array());

    let mut t = Drawing::new(1);
    t.add_vertex("a", exact(0, 0)).add_vertex("b", exact(2, 0)).add_vertex("c", exact(0, 2));
    for (id, s, e) in [("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")] {
        t.add_edge(Edge::new(id, s, e));
    }
    let path = write(&dir, "tri.json", &t);
    let r = json(&rac1(&["stats", &path]));
    assert!(r["faces"].as_array().unwrap().iter().all(|f| f["good"] == true));
}

#[test]
fn audit_and_bound_on_generated_family() {
    let dir = TempDir::new().unwrap();
    let path = generated(&dir, "1");
    let out = rac1(&["audit", &path]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["passed"], true);
    assert_eq!(r["e1_bound"]["e1"], 60);
    assert_eq!(r["e1_bound"]["bound"], 72);

    let out = rac1(&["bound", &path]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["m"], 90);
    assert_eq!(r["bound"], 99.0);
    assert_eq!(r["slack"], 9.0);
}

#[test]
fn removal_sim_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let trace = dir.path().join("trace.json");
    let args = ["removal-sim", "--n", "9", "--k", "10", "--seed", "4"];
    let mut with_trace = args.to_vec();
    with_trace.extend(["--trace-out", trace.to_str().unwrap()]);
    let a = rac1(&with_trace);
    let b = rac1(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["within_bound"], true);
    assert_eq!(r["k"], 10);
    let t: Value = serde_json::from_str(&fs::read_to_string(Path::new(&trace)).unwrap()).unwrap();
    assert_eq!(t["trace"]["steps"].as_array().unwrap().len(), 10);
}

#[test]
fn export_svg_marks_crossings() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "x.json", &x_pair(2));
    let plain = dir.path().join("plain.svg");
    let marked = dir.path().join("marked.svg");
    assert!(rac1(&["export-svg", &path, "--out", plain.to_str().unwrap()]).status.success());
    assert!(rac1(&["export-svg", &path, "--out", marked.to_str().unwrap(), "--crossings"]).status.success());
    let plain = fs::read_to_string(plain).unwrap();
    let marked = fs::read_to_string(marked).unwrap();
    assert!(plain.starts_with("<svg") || plain.starts_with("<?xml"));
    assert!(marked.len() > plain.len());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(rac1(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(rac1(&["generate", "--levels", "zero"]).status.code(), Some(2));
    assert_eq!(rac1(&["generate", "--levels", "0"]).status.code(), Some(2));
    assert_eq!(rac1(&["--help"]).status.code(), Some(0));
}
