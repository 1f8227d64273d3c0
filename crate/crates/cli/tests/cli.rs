use std::process::{Command, Output};

use serde_json::Value;

fn qinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qinv")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = qinv(args);
    let value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (value, out.status.code().expect("exit code"))
}

#[test]
fn poincare_series_of_cyclic_three() {
    let (r, code) = report(&["qi-poincare", "--group", "cyclic:3", "--k", "0,1,1"]);
    assert_eq!(code, 0);
    assert_eq!(r["schemaVersion"], 1);
    assert_eq!(r["command"], "qi-poincare");
    assert_eq!(r["passed"], true);
    assert_eq!(r["result"]["agree"], true);
    assert_eq!(r["result"]["series"], "(1 + t^4 + t^5) / (1 - t^3)");
    assert_eq!(r["config"]["maxDeg"], 20);
}

#[test]
fn kz_twist_of_cyclic_four_is_identity() {
    let (r, code) = report(&["kz-twist", "--group", "cyclic:4", "--k", "0,1,1,1"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["identity"], true);
    assert_eq!(r["result"]["preservesDimensionAndC"], true);
}

#[test]
fn dunkl_axioms_suite_passes_on_dihedral() {
    let (r, code) = report(&["verify", "--suite", "dunkl-axioms", "--group", "dihedral:3:3", "--k", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["summary"]["passed"], 1);
    assert_eq!(r["result"]["summary"]["failed"], 0);
    assert_eq!(r["config"]["suite"], "dunkl-axioms");
}

#[test]
fn rank_one_basis_skips_degree_one() {
    let (r, code) = report(&["qi-basis", "--group", "cyclic:2", "--k", "0,1", "--max-deg", "4"]);
    assert_eq!(code, 0);
    let degrees = r["result"]["perDegree"].as_array().expect("array");
    let dims: Vec<i64> = degrees.iter().map(|d| d["dim"].as_i64().expect("dim")).collect();
    assert_eq!(dims, [1, 0, 1, 1, 1]);
}

#[test]
fn free_generators_count_is_group_order() {
    let (r, code) = report(&["free-gens", "--group", "dihedral:3:3", "--k", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["passed"], true);
}

#[test]
fn shift_operator_certificates_pass() {
    for dir in ["raising", "lowering"] {
        let (r, code) = report(&["shift-op", "--group", "cyclic:3", "--k", "0,1,1", "--shift-a", "2", "--direction", dir]);
        assert_eq!(code, 0, "{dir}");
        assert!(r["result"]["intertwining"].as_array().expect("array").iter().all(|c| c["passed"] == true));
    }
}

#[test]
fn baf_checks_pass() {
    let (r, code) = report(&["baf", "--group", "cyclic:2", "--k", "0,2"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["passed"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--suite", "membership-crosscheck", "--group", "cyclic:3", "--k", "0,1,2", "--max-deg", "6"];
    let first = qinv(&args);
    let second = qinv(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("job.json");
    std::fs::write(&path, r#"{"command":"qi-poincare","group":"cyclic:3","k":"0,1,1","maxDeg":6}"#).expect("write");
    let config = path.to_str().expect("utf8");
    let (r, code) = report(&["--config", config]);
    assert_eq!(code, 0);
    assert_eq!(r["config"]["maxDeg"], 6);
    let (r, _) = report(&["--config", config, "--max-deg", "9"]);
    assert_eq!(r["config"]["maxDeg"], 9);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("report.json");
    let out = qinv(&["group-info", "--group", "cyclic:2", "--out", path.to_str().expect("utf8")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let value: Value = serde_json::from_str(&std::fs::read_to_string(&path).expect("read")).expect("json");
    assert_eq!(value["command"], "group-info");
}

#[test]
fn text_format_prints_paths() {
    let out = qinv(&["qi-basis", "--group", "cyclic:2", "--k", "0,1", "--max-deg", "2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).expect("utf8");
    assert!(text.lines().any(|l| l == "passed: true"));
    assert!(text.lines().any(|l| l == "result.perDegree[2].basis: [\"x^2\"]"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().expect("tempdir");
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"command":"qi-basis","group":"cyclic:2","colour":"red"}"#).expect("write");
    let cases: Vec<Vec<&str>> = vec![
        vec!["qi-basis", "--group", "nope"],
        vec!["qi-basis"],
        vec!["qi-basis", "--group", "cyclic:3", "--k", "1"],
        vec!["verify", "--suite", "unknown"],
        vec!["--config", bad.to_str().expect("utf8")],
    ];
    for args in cases {
        let out = qinv(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
