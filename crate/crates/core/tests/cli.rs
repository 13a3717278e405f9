use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fano-instantons")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sample_then_validate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for (g, k) in [("quadric", "4"), ("v5", "2"), ("v22", "1")] {
        let file = dir.path().join(format!("{g}.json"));
        let out = bin(&["sample", "--geometry", g, "--k", k, "--seed", "11", "--output", path(&file)]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let out = bin(&["validate", "--input", path(&file), "--npoints", "20"]);
        assert_eq!(out.status.code(), Some(0));
        let report = json(&out);
        assert_eq!(report["command"], "validate");
        assert_eq!(report["passed"], true);
        assert_eq!(report["points_checked"], 20);
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    let args = ["sample", "--geometry", "quadric", "--k", "5", "--seed", "3"];
    assert_eq!(bin(&args).stdout, bin(&args).stdout);
    let args = ["delta", "--geometry", "v5", "--k", "3", "--seed", "3"];
    assert_eq!(bin(&args).stdout, bin(&args).stdout);
    assert_ne!(
        bin(&["sample", "--geometry", "quadric", "--k", "5", "--seed", "4"]).stdout,
        bin(&["sample", "--geometry", "quadric", "--k", "5", "--seed", "3"]).stdout
    );
}

#[test]
fn tampered_documents_fail_validation() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.json");
    bin(&["sample", "--geometry", "quadric", "--k", "3", "--output", path(&file)]);
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    // zero a whole row of A: the fiber map is no longer surjective
    for w in doc["monad"]["A"][0].as_array_mut().unwrap() {
        for x in w.as_array_mut().unwrap() {
            *x = Value::from(0);
        }
    }
    std::fs::write(&file, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = bin(&["validate", "--input", path(&file), "--npoints", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn configuration_errors_exit_two() {
    let out = bin(&["sample", "--geometry", "v22", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1..=2"));
    assert_eq!(bin(&["sample", "--geometry", "quadric", "--k", "2", "--prime", "12"]).status.code(), Some(2));
    assert_eq!(bin(&["validate", "--input", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(bin(&["sample", "--geometry", "p3", "--k", "2"]).status.code(), Some(2));
    assert_eq!(bin(&["semistable", "--prime", "5"]).status.code(), Some(2));
    assert_eq!(bin(&["jumping", "--geometry", "v5", "--k", "2"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"format\": 99}").unwrap();
    assert_eq!(bin(&["validate", "--input", path(&bad)]).status.code(), Some(2));
}

#[test]
fn invariant_commands_report() {
    let dd = json(&bin(&["dd", "--geometry", "quadric", "--k", "3"]));
    assert_eq!(dd["zero"], false);
    assert_eq!(dd["format"], 1);
    let jl = json(&bin(&["jumping", "--geometry", "quadric", "--k", "4"]));
    assert_eq!(jl["degree"], 6);
    let jc = json(&bin(&["jumping", "--geometry", "v22", "--k", "2"]));
    assert_eq!(jc["degree"], 2);
    let ap = json(&bin(&["apolar"]));
    assert_eq!(ap["quartic"]["degree"], 4);
    let ss = bin(&["semistable", "--seed", "1"]);
    assert_eq!(ss.status.code(), Some(0));
    assert_eq!(json(&ss)["witness"]["verdict"], "semistable");
    let chi = json(&bin(&["chi", "--geometry", "quadric", "--k", "9"]));
    assert_eq!(chi["identical"], true);
    let pencil = json(&bin(&["pencil", "--diagonal", "1,2,3,4,5,6"]));
    assert_eq!(pencil["sextic"]["smooth"], true);
    let pencil = json(&bin(&["pencil", "--diagonal", "1,1,3,4,5,6"]));
    assert_eq!(pencil["sextic"]["smooth"], false);
}
