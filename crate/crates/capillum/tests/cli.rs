use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capillum")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn octahedron_body(dir: &Path) -> String {
    let path = dir.join("body.json");
    fs::write(
        &path,
        r#"{"n":3,"vertices":[[1.2,0,0],[-1.2,0,0],[0,1.2,0],[0,-1.2,0],[0,0,1.2],[0,0,-1.2]]}"#,
    )
    .unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn hemisphere_cap_is_half() {
    let v = json(&["measures", "--n", "5", "--theta", "1.5707963267948966"]);
    assert_eq!(v["schema_version"], 1);
    let cap = v["results"].as_array().unwrap().iter().find(|r| r["measure"] == "cap").unwrap();
    assert_eq!(cap["kind"], "exact");
    assert!((cap["value"].as_f64().unwrap() - 0.5).abs() < 1e-14);
}

#[test]
fn explicit_sweep_passes_from_thirteen() {
    let v = json(&["explicit", "--sweep", "13..20"]);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for r in rows {
        assert_eq!(r["passes_2n"], true, "n={}", r["n"]);
    }
}

#[test]
fn ilp_reports_optimum_and_assignment() {
    let v = json(&["ilp", "--n", "5", "--s", "1", "--l", "0"]);
    let row = &v["results"][0];
    assert_eq!(row["n"], 5);
    assert!(row["M"].as_f64().unwrap() > 0.0);
    let total: u64 = row["assignment"].as_array().unwrap().iter().map(|p| p[1].as_u64().unwrap()).sum();
    assert!(total > 0);
}

#[test]
fn verify_round_trips_saved_directions() {
    let dir = tempfile::tempdir().unwrap();
    let body = octahedron_body(dir.path());
    let dirs = dir.path().join("dirs.json");
    let dirs = dirs.to_str().unwrap();
    let built = json(&["verify", "--body", &body, "--save-dirs", dirs]);
    assert_eq!(built["summary"]["illuminated"], true);
    let checked = json(&["verify", "--body", &body, "--dirs", dirs]);
    assert_eq!(checked["summary"]["illuminated"], true);
    assert_eq!(checked["summary"]["directions"], built["summary"]["directions"]);
}

#[test]
fn verify_reports_dark_body_without_failing() {
    let dir = tempfile::tempdir().unwrap();
    let body = octahedron_body(dir.path());
    let dirs = dir.path().join("one.json");
    fs::write(&dirs, r#"{"n":3,"directions":[[1,0,0]]}"#).unwrap();
    let v = json(&["verify", "--body", &body, "--dirs", dirs.to_str().unwrap()]);
    assert_eq!(v["summary"]["illuminated"], false);
    assert_eq!(v["summary"]["spans"], false);
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(run(&["bound", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["measures", "--n", "5", "--theta", "2.0"]).status.code(), Some(2));
}

#[test]
fn missing_input_file_exits_with_one() {
    assert_eq!(run(&["verify", "--body", "/nonexistent/body.json"]).status.code(), Some(1));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for format in ["json", "csv", "table"] {
        let args = ["--format", format, "bound", "--n", "5"];
        let (a, b) = (run(&args), run(&args));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "format {format}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.csv");
    let out = run(&["--format", "csv", "--out", path.to_str().unwrap(), "explicit", "--n", "13"]);
    assert!(out.status.success());
    let text = fs::read_to_string(path).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert!(reader.headers().unwrap().iter().any(|h| h == "passes_2n"));
    assert_eq!(reader.records().count(), 1);
}
