use std::path::PathBuf;
use std::process::{Command, Output};

fn critlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critlat")).args(args).env_remove("CRITLAT_MAX_SIZE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("critlat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn con_of_m3() {
    let o = critlat(&["con", "M:3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("simple: true, |Con| = 2"));
}

#[test]
fn broken_lattice_is_rejected() {
    let path = scratch("broken.lat");
    std::fs::write(&path, r#"{"name":"broken","elements":["0","a","b"],"covers":[["0","a"],["0","b"]]}"#).unwrap();
    let o = critlat(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotALattice"));
}

#[test]
fn crit_gate_json_and_exit_code() {
    let o = critlat(&["crit-gate", "M:4", "M:3", "--json"]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verdict"], "AtMostAleph2");
    assert_eq!(critlat(&["crit-gate", "M:3", "M:4"]).status.code(), Some(0));
}

#[test]
fn env_budget_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_critlat"))
        .args(["var-leq", "M:3", "M:4"])
        .env("CRITLAT_MAX_SIZE", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("BudgetExceeded"));
}

#[test]
fn bundle_written_and_checked() {
    let path = scratch("m3.bundle.json");
    let p = path.to_str().unwrap();
    assert!(critlat(&["chain-diagram", "M:3", "-o", p, "--bundle", "dual"]).status.success());
    let o = critlat(&["lift-check", p]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("valid: true"));
    let o = critlat(&["extract-embedding", "M:3", "--lifting", p, "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["dualized"], true);
}

#[test]
fn threads_do_not_change_output() {
    let one = stdout(&critlat(&["var-leq", "N5", "M:3", "--json", "--threads", "1"]));
    let four = stdout(&critlat(&["var-leq", "N5", "M:3", "--json", "--threads", "4"]));
    assert_eq!(one, four);
}

#[test]
fn diagram_export_round_trips_through_dot() {
    let path = scratch("n5.diagram.json");
    let p = path.to_str().unwrap();
    assert!(critlat(&["chain-diagram", "N5", "-o", p]).status.success());
    let o = critlat(&["export-dot", p, "--diagram"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("digraph diagram {"));
}

#[test]
fn every_verb_runs() {
    let runs: &[&[&str]] = &[
        &["simple", "N5"],
        &["si", "bool:2"],
        &["hs-member", "2", "N5"],
        &["var-leq", "M:3", "N5"],
        &["directing-diagram", "M:3", "--c1", "0<x1<1", "--c2", "0<x2<1", "--c3", "0<x3<1"],
        &["glued-diagram", "M:3"],
        &["find-chains", "chain:3"],
        &["dual", "F22"],
        &["iso", "N5", "N5"],
        &["conc-report", "chain:2", "chain:3"],
        &["export-dot", "M:4"],
    ];
    for args in runs {
        let o = critlat(args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stdout.is_empty(), "{args:?}");
    }
    assert_eq!(critlat(&["no-such-verb"]).status.code(), Some(2));
}
