use std::path::Path;
use std::process::{Command, Output};

use kstab_core::rational;
use serde_json::Value;

fn kstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kstab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = kstab(&all);
    assert!(
        o.status.success(),
        "{:?}: {}",
        args,
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const EXAMPLE_JSON: &str = r#"{
  "label": "three halves",
  "p1": {"points": [
    {"at": "0", "c": "1/2"},
    {"at": "inf", "c": "1/2"},
    {"at": "1", "c": "1/2"}
  ]}
}"#;

#[test]
fn convert_from_delta() {
    let v = json(&["convert", "--delta", "1/2", "--n", "2"]);
    let s = &v["summary"];
    assert_eq!(s["deltaPrime"], "1");
    assert_eq!(s["theta"], "4/5");
    assert_eq!(s["epsilonPrime"], "1/5");
    assert_eq!(s["epsilon"], "1/6");
}

#[test]
fn convert_from_epsilon() {
    let v = json(&["convert", "--epsilon", "1/2", "--n", "2"]);
    let s = &v["summary"];
    assert_eq!(
        (&s["epsilonPrime"], &s["deltaPrime"], &s["delta"]),
        (&"1".into(), &"1/3".into(), &"1/4".into())
    );
    assert!(s.get("theta").is_none());
}

#[test]
fn convert_out_of_range() {
    let o = kstab(&["convert", "--delta", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("range"));
    assert_eq!(
        kstab(&["convert", "--delta", "1/2", "--epsilon", "1/2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn p1_example_is_uniformly_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "ex.json", EXAMPLE_JSON);
    let v = json(&["eval", &path]);
    assert_eq!(v["summary"]["verdict"], "UniformlyKStable");
    assert_eq!(v["summary"]["epsilon"], "1/2");
    assert_eq!(v["input"]["label"], "three halves");
    assert_eq!(v["evaluations"].as_array().unwrap().len(), 4);
    assert_eq!(v["passed"], true);
}

#[test]
fn inline_marks_match_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "ex.json", EXAMPLE_JSON);
    let from_file = json(&["p1", "eval", &path]);
    let inline = json(&["p1", "eval", "-m", "0:1/2", "-m", "inf:1/2", "-m", "1:1/2"]);
    assert_eq!(from_file["summary"], inline["summary"]);
    assert_eq!(from_file["evaluations"], inline["evaluations"]);
}

#[test]
fn toml_matches_json() {
    let dir = tempfile::tempdir().unwrap();
    let j = write(dir.path(), "ex.json", EXAMPLE_JSON);
    let t = write(
        dir.path(),
        "ex.toml",
        "label = \"three halves\"\n\n[[p1.points]]\nat = \"0\"\nc = \"1/2\"\n\n[[p1.points]]\nat = \"inf\"\nc = \"1/2\"\n\n[[p1.points]]\nat = \"1\"\nc = \"1/2\"\n",
    );
    assert_eq!(json(&["eval", &j]), json(&["eval", &t]));
}

#[test]
fn klt_violation_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "bad.json",
        r#"{"p1": {"points": [{"at": "0", "c": "3/2"}]}}"#,
    );
    let o = kstab(&["eval", &path]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("line 1") && err.contains("p1") && err.contains("3/2"),
        "{err}"
    );
}

#[test]
fn malformed_rational_names_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "bad.toml",
        "[p1]\npoints = [{at = \"0\", c = \"1/0\"}]\n",
    );
    let o = kstab(&["eval", &path]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("p1.points[0].c") && err.contains("line 2"),
        "{err}"
    );
}

#[test]
fn descriptor_needs_exactly_one_kind() {
    let dir = tempfile::tempdir().unwrap();
    let none = write(dir.path(), "none.json", r#"{"label": "empty"}"#);
    let two = write(
        dir.path(),
        "two.json",
        r#"{"p1": {"points": []}, "plane_divisor": {"d": 2}}"#,
    );
    let unknown = write(dir.path(), "unknown.json", r#"{"p2": {}}"#);
    for p in [none, two, unknown] {
        assert_eq!(kstab(&["eval", &p]).status.code(), Some(2), "{p}");
    }
}

#[test]
fn p2_sweep_minimum_is_zero() {
    let v = json(&["toric", "sweep", "--fan", "p2", "--radius", "5"]);
    assert_eq!(v["summary"]["min_betahat"], "0");
    let evals = v["evaluations"].as_array().unwrap();
    assert!(evals
        .iter()
        .all(|e| e["report"]["betahat"].as_str().unwrap() >= "0"));
    assert!(evals
        .iter()
        .all(|e| e["beta_barycenter"] == e["report"]["beta"]));
}

#[test]
fn toric_descriptor_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "p2.json",
        r#"{"toric": {"rays": [[1,0],[0,1],[-1,-1]], "cones": [[0,1],[1,2],[2,0]]}}"#,
    );
    let v = json(&["eval", &path, "--v", "1,0"]);
    assert_eq!(v["evaluations"][0]["valuation"], "(1,0)");
    assert_eq!(v["evaluations"][0]["report"]["A"], "1");
    assert_eq!(v["evaluations"][0]["report"]["betahat"], "0");
    let builtin = json(&["toric", "eval", "--fan", "p2", "--v", "1,0"]);
    assert_eq!(v["evaluations"], builtin["evaluations"]);
}

#[test]
fn weighted_blowup_eval() {
    let v = json(&["p2wb", "eval", "--a", "2", "--b", "1", "--tau", "5"]);
    assert_eq!(v["summary"]["epsilon"], "18/5");
    assert_eq!(v["evaluations"][0]["report"]["betahat"], "2/45");
    let o = kstab(&["p2wb", "eval", "--a", "2", "--b", "1", "--tau", "7"]);
    assert_eq!(o.status.code(), Some(2));
    let o = kstab(&["p2wb", "eval", "--a", "4", "--b", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn plane_divisor_eval() {
    let v = json(&["p2wb", "eval", "--d", "3"]);
    assert_eq!(v["evaluations"][0]["report"]["betahat"], "2/3");
}

#[test]
fn p2wb_sweep_is_nonnegative() {
    let v = json(&["p2wb", "sweep", "--max-a", "8"]);
    let ranges = v["summary"]["ranges"].as_array().unwrap();
    assert!(ranges.iter().all(|r| r["min"] == "0"));
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "inequalities", "--seed", "7"][..],
        &["verify", "toric-vs-p2wb", "--max-a", "10"],
        &["verify", "lattice-limit", "--k", "30"],
    ] {
        let o = kstab(args);
        assert!(o.status.success(), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).ends_with("PASS\n"));
    }
}

#[test]
fn verify_failure_exit_code() {
    let o = kstab(&["verify", "lattice-limit", "--k", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAILED"));
    assert_eq!(kstab(&["verify", "nope"]).status.code(), Some(2));
}

#[test]
fn output_is_reproducible() {
    for args in [
        &[
            "--json",
            "verify",
            "inequalities",
            "--seed",
            "11",
            "--samples",
            "15",
        ][..],
        &[
            "toric",
            "sweep",
            "--fan",
            "p1xp1",
            "--coefficients",
            "1/2,0,1/3,0",
        ],
    ] {
        assert_eq!(kstab(args).stdout, kstab(args).stdout);
    }
}

fn rational_strings(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s)
            if s.chars()
                .next()
                .is_some_and(|c| c == '-' || c.is_ascii_digit()) =>
        {
            out.push(s.clone())
        }
        Value::Array(xs) => xs.iter().for_each(|x| rational_strings(x, out)),
        Value::Object(m) => m.values().for_each(|x| rational_strings(x, out)),
        _ => {}
    }
}

#[test]
fn emitted_rationals_round_trip() {
    let v = json(&["p2wb", "eval", "--a", "3", "--b", "2"]);
    let mut found = Vec::new();
    rational_strings(&v, &mut found);
    assert!(found.len() > 20);
    for s in found.iter().filter(|s| !s.contains('.')) {
        let q = rational::parse(s).unwrap();
        assert_eq!(&rational::fmt(&q), s);
    }
}

#[test]
fn float_flag_adds_approximations() {
    let v = json(&["--float", "p2wb", "eval", "--d", "2"]);
    assert_eq!(v["evaluations"][0]["approx"]["betahat"], 0.5);
    let plain = json(&["p2wb", "eval", "--d", "2"]);
    assert!(plain["evaluations"][0].get("approx").is_none());
}

#[test]
fn csv_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curves.csv");
    let o = kstab(&[
        "toric",
        "eval",
        "--fan",
        "p2",
        "--v",
        "2,1",
        "--csv",
        path.to_str().unwrap(),
        "--csv-steps",
        "6",
    ]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], "valuation,x,vol,x_exact,vol_exact");
    assert_eq!(lines.len(), 8);
    assert!(lines[1].starts_with("\"(2,1)\",0,9,0,9"), "{}", lines[1]);
}

#[test]
fn timing_only_on_request() {
    let v = json(&["convert", "--delta", "1/3"]);
    assert!(v.get("wall_time_ms").is_none());
    let v = json(&["--timing", "verify", "lattice-limit"]);
    assert!(v["wall_time_ms"].is_u64());
}
