use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn input(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("inputs").join(name)
}

fn orbifund(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbifund"))
        .args(args)
        .env_remove("ORBIFUND_BUDGET")
        .output()
        .unwrap()
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = orbifund(args);
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), report)
}

fn path(name: &str) -> String {
    input(name).to_str().unwrap().to_string()
}

#[test]
fn theta_graph_has_rank_two() {
    let (code, r) = run(&["pi1", &path("theta.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["result"]["rank"], 2);
    assert_eq!(r["result"]["presentation"]["generators"].as_array().unwrap().len(), 2);
    assert_eq!(r["result"]["presentation"]["relators"], Value::Array(vec![]));
}

#[test]
fn sl2z_moduli_is_trivial() {
    let (code, r) = run(&["moduli", &path("sl2z.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["order"], 1);
    assert_eq!(r["result"]["trivial_fingerprint"], true);
    assert_eq!(r["result"]["abelianization"], "1");
}

#[test]
fn teardrop_is_not_uniformizable() {
    let (code, r) = run(&["uniformizable", "--bound", "12", &path("teardrop.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "no");
    assert_eq!(r["result"]["witness"]["marking"], "cone");
    assert_eq!(r["result"]["image"], "1");
}

#[test]
fn football_uniformizes_and_small_bounds_are_unknown() {
    let (code, r) = run(&["uniformizable", &path("football3.json")]);
    assert_eq!((code, r["verdict"].as_str()), (0, Some("yes")));
    assert_eq!(r["result"]["cover"]["index"], 3);
    assert_eq!(r["result"]["cover"]["schematic"], true);
    let (code, r) = run(&["uniformizable", "--bound", "2", &path("football3.json")]);
    assert_eq!((code, r["verdict"].as_str()), (2, Some("unknown")));
}

#[test]
fn rose_covers_count_free_group_subgroups() {
    let (code, r) = run(&["covers", "--max-degree", "3", &path("rose2.json")]);
    assert_eq!(code, 0);
    let counts = &r["result"]["counts"];
    let subgroups: Vec<u64> = ["1", "2", "3"].iter().map(|d| counts[d]["subgroups"].as_u64().unwrap()).collect();
    assert_eq!(subgroups, vec![1, 3, 13]);
    let classes: Vec<u64> = ["1", "2", "3"].iter().map(|d| counts[d]["classes"].as_u64().unwrap()).collect();
    assert_eq!(classes, vec![1, 3, 7]);
}

#[test]
fn schema_errors_carry_a_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"vertices":["p"],"edges":[{"id":"e","u":"p","v":7}],"base":"p"}"#).unwrap();
    let (code, r) = run(&["pi1", bad.to_str().unwrap()]);
    assert_eq!(code, 64);
    assert_eq!(r["verdict"], "input_error");
    assert_eq!(r["error"]["kind"], "schema");
    assert_eq!(r["error"]["pointer"], "/edges/0/v");

    fs::write(&bad, r#"{"pi1":{"generators":["a"]},"markings":[{"id":"m","hidden":{"degree":2,"generators":[[1,0]]},"omega":{"h0":"a"},"extra":1}]}"#).unwrap();
    let (code, r) = run(&["moduli", bad.to_str().unwrap()]);
    assert_eq!(code, 64);
    assert_eq!(r["error"]["pointer"], "/markings/0/extra");

    fs::write(&bad, "not json").unwrap();
    assert_eq!(run(&["check", bad.to_str().unwrap()]).0, 64);
}

#[test]
fn invalid_objects_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"vertices":["p"],"edges":[{"id":"e","u":"p","v":"q"}],"base":"p"}"#).unwrap();
    let (code, r) = run(&["pi1", bad.to_str().unwrap()]);
    assert_eq!(code, 64);
    assert_eq!(r["error"]["kind"], "input");
    // omega must respect the relators: a has order 2 but the image generator has order 3
    fs::write(&bad, r#"{"pi1":{"generators":["a"],"relators":["aa"]},"markings":[{"id":"m","hidden":{"degree":3,"generators":[[1,2,0]]},"omega":{"h0":"a"}}]}"#).unwrap();
    let (code, r) = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 1, "{r}");
    assert_eq!(run(&["pi1", "/nonexistent/graph.json"]).0, 64);
    assert_eq!(orbifund(&["covers", "--max-degree", "0", &path("rose2.json")]).status.code(), Some(64));
}

#[test]
fn budget_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_orbifund"))
        .args(["covers", &path("rose2.json")])
        .env("ORBIFUND_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["bounds"]["node_budget"], 5);
    assert_eq!(r["verdict"], "unknown");
    assert_eq!(r["error"]["kind"], "bound");
}

#[test]
fn reports_are_reproducible() {
    for args in [
        vec!["check", "--seed", "7", "--dot"],
        vec!["quotient", "--dot"],
        vec!["doomed"],
    ] {
        let mut full = args.clone();
        let file = path("reflected_square.json");
        full.push(&file);
        let a = orbifund(&full);
        let b = orbifund(&full);
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
    let (_, r) = run(&["check", "--seed", "7", &path("theta.json")]);
    assert_eq!(r["seed"], 7);
    assert_eq!(r["tool"], "orbifund");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["bounds"]["max_index"], 3);
}

#[test]
fn output_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let code = orbifund(&["fpr", "-o", out.to_str().unwrap(), &path("football3.json")]).status.code();
    assert_eq!(code, Some(0));
    let written = fs::read(&out).unwrap();
    assert_eq!(written, orbifund(&["fpr", &path("football3.json")]).stdout);
}

#[test]
fn check_runs_on_every_shipped_input() {
    for (name, kind, want) in [
        ("theta.json", "graph", 0),
        ("rose2.json", "graph", 0),
        ("reflected_square.json", "action", 0),
        ("rotated_square.json", "action", 0),
        ("football3.json", "orbispace", 0),
        ("teardrop.json", "orbispace", 0),
        ("pathological.json", "orbispace", 0),
        // infinite, so the order comparison stays open
        ("sl2z.json", "orbispace", 2),
    ] {
        let (code, r) = run(&["check", &path(name)]);
        assert_eq!(code, want, "{name}: {r}");
        assert_eq!(r["result"]["kind"], kind);
    }
}

#[test]
fn quotient_of_the_reflection_is_a_path() {
    let (code, r) = run(&["quotient", "--dot", &path("reflected_square.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["quotient_rank"], 0);
    assert_eq!(r["result"]["group_order"], 2);
    assert_eq!(r["dot"].as_array().unwrap().len(), 2);
    let (code, r) = run(&["kill-omega", &path("pathological.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["cover"]["index"], 1);
}

#[test]
fn schemas_are_versioned_and_match_the_detector() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas");
    for (file, key) in [("graph.v1.json", "vertices"), ("action.v1.json", "group"), ("orbispace.v1.json", "pi1")] {
        let s: Value = serde_json::from_str(&fs::read_to_string(dir.join(file)).unwrap()).unwrap();
        assert!(s["$id"].as_str().unwrap().ends_with(file));
        let required: Vec<&str> = s["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
        assert!(required.contains(&key), "{file}");
    }
}
