//! Exit codes, diagnostics and report shapes of the `gfp` binary.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::NamedTempFile;

fn corpus_file(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "corpus", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn doc(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &NamedTempFile) -> String {
    f.path().to_string_lossy().into_owned()
}

fn gfp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfp")).args(args).output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

const CORRUPTED: &str = r#"{"kind":"finite","points":["0","1/2","1"],"values":[
  {"triple":[0,0,1],"g":"4"},{"triple":[0,1,1],"g":"4"},{"triple":[0,0,2],"g":"6"},
  {"triple":[0,2,2],"g":"0"},{"triple":[1,1,2],"g":"5"},{"triple":[1,2,2],"g":"5"},
  {"triple":[0,1,2],"g":"15/2"}]}"#;

#[test]
fn check_passes_on_example() {
    let o = gfp(&["check", "--space", &corpus_file("example1_space.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["all_pass"], true);
}

#[test]
fn check_reports_g2_witness() {
    let f = doc(CORRUPTED);
    let o = gfp(&["check", "--space", &path(&f)]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["G2"]["pass"], false);
    let mut pts: Vec<String> = serde_json::from_value(v["G2"]["witness"]["points"].clone()).unwrap();
    pts.sort();
    assert_eq!(pts, ["0", "1"]);
}

#[test]
fn certify_on_invalid_space_warns_and_reports() {
    let f = doc(CORRUPTED);
    let o = gfp(&["certify", "--theorem", "t1", "--space", &path(&f), "--map", &corpus_file("example1_map.json")]);
    assert!(matches!(o.status.code(), Some(0 | 1)));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    stdout_json(&o);
}

#[test]
fn malformed_documents_exit_2_with_path() {
    let f = doc(r#"{"kind":"finite","points":["a","b"],"values":[{"triple":[0,0,1],"g":"1"},{"triple":[0,1,1],"g":"1/0"}]}"#);
    let o = gfp(&["check", "--space", &path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("values[1].g"), "{err}");

    let o = gfp(&["check", "--space", "/nonexistent/space.json"]);
    assert_eq!(o.status.code(), Some(2));

    let m = doc(r#"{"pieces":[{"on":["3/2","7/4"],"expr":"x +"},{"on":["7/4","2"],"closed_right":true,"expr":"x"}]}"#);
    let o = gfp(&["certify", "--theorem", "t1", "--space", &corpus_file("interval_space.json"), "--map", &path(&m)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pieces[0].expr"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(gfp(&["certify", "--theorem", "t9"]).status.code(), Some(2));
    assert_eq!(gfp(&[]).status.code(), Some(2));
    let o = gfp(&[
        "certify",
        "--theorem",
        "t2",
        "--space",
        &corpus_file("example1_space.json"),
        "--map",
        &corpus_file("example1_map.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn t2_certificate_fails_on_example() {
    let c = doc(r#"{"alpha":"1/4","beta":"1/4"}"#);
    let o = gfp(&[
        "certify",
        "--theorem",
        "t2",
        "--space",
        &corpus_file("example1_space.json"),
        "--map",
        &corpus_file("example1_map.json"),
        "--coeffs",
        &path(&c),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["holds"], false);
    let w = v["violations"].as_array().unwrap().iter().find(|r| r["triple"] == json!([0, 1, 1])).unwrap();
    assert_eq!((w["lhs"].as_str(), w["rhs"].as_str()), (Some("4"), Some("1")));
}

#[test]
fn inadmissible_coefficients_exit_2() {
    let c = doc(r#"{"alpha":"1/2","beta":"1/2"}"#);
    let o = gfp(&[
        "certify",
        "--theorem",
        "t2",
        "--space",
        &corpus_file("example1_space.json"),
        "--map",
        &corpus_file("example1_map.json"),
        "--coeffs",
        &path(&c),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_finite_trace() {
    let o = gfp(&[
        "solve",
        "--space",
        &corpus_file("example1_space.json"),
        "--map",
        &corpus_file("example1_map.json"),
        "--x0",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["points"], json!(["1", "0", "0"]));
    assert_eq!(v["d"], json!(["6", "0"]));
    assert_eq!(v["alpha"], json!(["12/7"]));
    assert_eq!(v["terminated"], "Converged");
    assert_eq!((v["limit"].as_str(), v["residual"].as_str()), (Some("0"), Some("0")));
}

#[test]
fn solve_cycle_is_negative() {
    let m = doc(r#"{"targets":[1,2,0]}"#);
    let o = gfp(&["solve", "--space", &corpus_file("example1_space.json"), "--map", &path(&m), "--x0", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["terminated"], "CycleDetected");
    assert_eq!(v["cycle"], json!({"start": 0, "length": 3}));
}

#[test]
fn solve_interval_with_rate() {
    let o = gfp(&[
        "solve",
        "--space",
        &corpus_file("interval_space.json"),
        "--map",
        &corpus_file("interval_map.json"),
        "--x0",
        "1.6",
        "--coeffs",
        &corpus_file("interval_coeffs.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    let limit: f64 = v["limit"].as_str().unwrap().parse().unwrap();
    assert!((limit - 2.0).abs() < 1e-6);
    let rate = v["rate"]["observed"].as_f64().unwrap();
    assert!((rate - 0.75).abs() < 0.05);
    assert_eq!(v["rate"]["bound_t4"], "3/4");
}

#[test]
fn solve_t5_complex() {
    let args = |map: String| {
        vec![
            "solve".to_string(),
            "--space".into(),
            corpus_file("complex_space.json"),
            "--map".into(),
            map,
            "--x0".into(),
            "1.6".into(),
            "--t5".into(),
            "--coeffs".into(),
            corpus_file("complex_coeffs.json"),
        ]
    };
    let run = |a: Vec<String>| gfp(&a.iter().map(String::as_str).collect::<Vec<_>>());
    let o = run(args(corpus_file("complex_map.json")));
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["points"][1], "1.81");
    assert_eq!(v["t5"]["monotone"], true);
    assert_eq!(v["t5"]["fixed"], true);
    assert!(v["residual"].is_object());
    // A decreasing map fails the ordered hypothesis.
    let down = doc(r#"{"expr":"7/2 - x"}"#);
    let o = run(args(path(&down)));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nondecreasing"));
}

#[test]
fn fixed_points_and_separation() {
    let o = gfp(&[
        "fixed-points",
        "--space",
        &corpus_file("example1_space.json"),
        "--map",
        &corpus_file("example1_map.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["fixed_points"], json!(["0", "1/2"]));
    assert_eq!(v["separation"]["bound"], "1/3");
    assert_eq!(v["orbital_continuity"]["holds"], true);

    let s = doc(r#"{"kind":"finite","points":["p","q"],"values":[{"triple":[0,0,1],"g":"1/4"},{"triple":[0,1,1],"g":"1/4"}]}"#);
    let m = doc(r#"{"targets":[0,1]}"#);
    let o = gfp(&["fixed-points", "--space", &path(&s), "--map", &path(&m)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["separation"]["bound_met"], false);
}

#[test]
fn falsify_with_injected_example() {
    let o = gfp(&["falsify", "--theorem", "t1", "--trials", "5", "--seed", "1", "--points", "3", "--inject-example"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["trials_run"], 5);
    assert!(v["hypothesis_hits"].as_u64().unwrap() >= 1);
    assert_eq!(v["config"]["inject_example"], true);
    assert_eq!(gfp(&["falsify", "--theorem", "t1", "--points", "1..9"]).status.code(), Some(2));
    assert_eq!(gfp(&["falsify", "--theorem", "t1", "--mode", "bogus"]).status.code(), Some(2));
}

#[test]
fn falsify_seed_determines_output() {
    let a = gfp(&["falsify", "--theorem", "t3", "--trials", "100", "--seed", "5"]);
    let b = gfp(&["falsify", "--theorem", "t3", "--trials", "100", "--seed", "5"]);
    let c = gfp(&["falsify", "--theorem", "t3", "--trials", "100", "--seed", "6"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn examples_table() {
    let o = gfp(&["examples"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("{0, 1/2}"));
    assert!(text.contains("108/13"));
    assert_eq!(text.lines().count(), 17);
}
