use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn localcut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localcut")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn gen(dir: &Path, name: &str, spec: &str, seed: &str) -> String {
    let path = dir.join(name);
    let out = localcut(&["gen", "--spec", spec, "--seed", seed, "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path.to_str().unwrap().to_owned()
}

#[test]
fn figure1_decomposes_into_k4_and_singletons() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "f1.txt", r#"{"family":"figure1"}"#, "0");
    let text = std::fs::read_to_string(&g).unwrap();
    assert!(text.starts_with("7 12\n"));
    for extra in [&[][..], &["--baseline"][..], &["--gamma", "1"][..]] {
        let mut args = vec!["mkecs", "-g", &g, "--k", "3", "--undirected", "--seed", "4"];
        args.extend_from_slice(extra);
        let out = localcut(&args);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(String::from_utf8_lossy(&out.stdout), "1 2 3 4\n5\n6\n7\n");
    }
}

#[test]
fn gen_writes_certificate_with_one_based_ids() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    let out = localcut(&[
        "gen",
        "--spec",
        r#"{"family":"clique_union","count":3,"size":4}"#,
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("12 18\n"), "{text}");
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(cert).unwrap()).unwrap();
    assert_eq!(cert["kind"], "closed_classes");
    assert_eq!(cert["classes"][0], serde_json::json!([1, 2, 3, 4]));
}

#[test]
fn detect_edge_component_reports_planted_set_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", "4 4\n1 2\n2 1\n2 3\n3 4\n");
    let out = localcut(&["detect-edge-component", "-g", &g, "--k", "1", "--delta", "4", "--p", "0.999", "--source", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["found"], true);
    assert!(v["out_edges"].as_array().unwrap().len() <= 1);
    assert!(v["members"].as_array().unwrap().contains(&Value::from(1)));
}

#[test]
fn detect_edge_component_without_component_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let spec = r#"{"family":"complete","n":6}"#;
    let g = gen(dir.path(), "k6.txt", spec, "0");
    let out = localcut(&["detect-edge-component", "-g", &g, "--k", "2", "--delta", "3", "--source", "1", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["found"], false);
}

#[test]
fn detect_vertex_component_finds_bottleneck() {
    let dir = tempfile::tempdir().unwrap();
    // {1,2} reaches the rest only through 3
    let g = write(dir.path(), "g.txt", "6 9\n1 2\n2 1\n2 3\n3 4\n4 5\n5 6\n6 4\n4 6\n5 3\n");
    let out = localcut(&["detect-vertex-component", "-g", &g, "--k", "1", "--delta", "4", "--p", "0.999", "--source", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert!(v["boundary"].as_array().unwrap().len() <= 1);
}

#[test]
fn vertex_connectivity_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let spec = r#"{"family":"planted_separator","side_sizes":[4,5],"sep_size":2}"#;
    let g = gen(dir.path(), "sep.txt", spec, "3");
    let out = localcut(&["vertex-connectivity", "-g", &g, "--undirected", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let oracle = stdout_json(&localcut(&["oracle", "-g", &g, "--undirected", "vertex-connectivity"]));
    assert_eq!(v["kappa"], oracle["kappa"]);
    assert_eq!(v["kappa"], 2);
    assert_eq!(v["witness"]["separator"].as_array().unwrap().len(), 2);
}

#[test]
fn tester_rejects_far_instance_and_accepts_complete_graph() {
    let dir = tempfile::tempdir().unwrap();
    let far = gen(dir.path(), "far.txt", r#"{"family":"clique_union","count":20,"size":3}"#, "0");
    let out = localcut(&[
        "test-connectivity", "-g", &far, "--undirected", "--property", "edge", "--k", "2", "--epsilon", "0.2", "--model",
        "bounded", "--seed", "1", "--trials", "20",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_json(&out)["rejects"].as_u64().unwrap() >= 10);

    let k6 = gen(dir.path(), "k6.txt", r#"{"family":"complete","n":6}"#, "0");
    for property in ["edge", "vertex"] {
        let out = localcut(&[
            "test-connectivity", "-g", &k6, "--property", property, "--k", "3", "--epsilon", "0.1", "--model", "unbounded",
            "--trials", "10",
        ]);
        assert_eq!(out.status.code(), Some(0), "{property}");
        assert_eq!(stdout_json(&out)["rejects"], 0);
    }
}

#[test]
fn oracle_lists_minimal_components() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "cycle.txt", "3 3\n1 2\n2 3\n3 1\n");
    let out = localcut(&["oracle", "-g", &g, "edge-out", "--source", "1", "--k", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["components"], serde_json::json!([[1, 2, 3]]));
    let out = localcut(&["oracle", "-g", &g, "split-lemmas"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["violations"], serde_json::json!([]));
}

#[test]
fn oracle_size_guard_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "big.txt", r#"{"family":"random_digraph","n":30,"m":60}"#, "0");
    let out = localcut(&["oracle", "-g", &g, "edge-out", "--source", "1", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn experiment_is_reproducible_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "exp.json",
        r#"{
            "name": "planted",
            "seed": 11,
            "trials": 30,
            "generator": {"family": "planted_edge_component", "component_size": 4, "k": 2, "blob_edges": 100},
            "task": {"kind": "detect_edge_component", "k": 2, "delta": 8}
        }"#,
    );
    let nd = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    for name in ["a.ndjson", "b.ndjson"] {
        let out = localcut(&["experiment", "--config", &config, "--ndjson", &nd(name), "--csv", &nd("t.csv")]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout_json(&out)["summary"]["violations"], 0);
    }
    let a = std::fs::read_to_string(nd("a.ndjson")).unwrap();
    assert_eq!(a, std::fs::read_to_string(nd("b.ndjson")).unwrap());
    assert_eq!(a.lines().count(), 30);
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "3 2\n1 2\n");
    let out = localcut(&["vertex-connectivity", "-g", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("header declares 2 edges"));

    let config = write(dir.path(), "exp.json", r#"{"name":"x","seed":1,"trials":1,"generator":{"family":"figure1"},"task":{"kind":"mkecs"}}"#);
    let out = localcut(&["experiment", "--config", &config]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("task"));

    let out = localcut(&["gen", "--spec", r#"{"family":"random_digraph","n":3,"m":10}"#]);
    assert_eq!(out.status.code(), Some(2));
}
