use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn detloci(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detloci"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn example_one_csv_has_a_row_per_n() {
    let o = detloci(&["chern", "examples", "--which", "1", "--n-min", "2", "--n-max", "5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(&rows[1][0], "3");
    assert_eq!(&rows[1][2], "12");
    assert_eq!(&rows[1][6], "-20/3");
}

#[test]
fn example_two_json() {
    let o = detloci(&["chern", "examples", "--which", "2", "--n-min", "3", "--n-max", "4"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["distinct"], Value::Bool(true));
}

#[test]
fn example_range_errors_are_usage_errors() {
    let o = detloci(&["chern", "examples", "--which", "2", "--n-min", "2", "--n-max", "4"]);
    assert_eq!(code(&o), 2);
    let o = detloci(&["chern", "examples", "--which", "3", "--n-min", "3", "--n-max", "4"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn angle_suite_passes() {
    let o = detloci(&["angles", "--suite", "sub_add", "--trials", "100", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["suite"], "sub_add");
    assert_eq!(v["trials"], 100);
    assert_eq!(v["failures"], 0);
    assert!(v["worst_margin"].as_f64().unwrap() >= 0.0);
}

#[test]
fn unknown_or_misplaced_suite_is_rejected() {
    assert_eq!(code(&detloci(&["angles", "--suite", "nope"])), 2);
    assert_eq!(code(&detloci(&["angles", "--suite", "whitney"])), 2);
    assert_eq!(code(&detloci(&["frobnicate"])), 2);
}

#[test]
fn missing_input_exits_two() {
    let o = detloci(&["chern", "solve", "--input", "missing.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn malformed_json_reports_line_and_column() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.json", "{\n  \"n\": 3,\n  \"r_e\": 2 oops\n}\n");
    let o = detloci(&["chern", "solve", "--input", &p]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.json:3:"), "{err}");
}

#[test]
fn solve_reports_exact_invariants() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.json", r#"{"n": 2, "r_e": 2, "r_f": 2, "r": 1}"#);
    let o = detloci(&["chern", "solve", "--input", &p]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["invariants"]["locus_dim"], 1);
    assert_eq!(v["invariants"]["vol"]["per_unit_vol"], "4");
    assert_eq!(v["invariants"]["n1_over_vol"], "-4");
}

#[test]
fn inconsistent_problem_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.json", r#"{"n": 2, "r_e": 3, "r_f": 3, "r": 1}"#);
    assert_eq!(code(&detloci(&["chern", "solve", "--input", &p])), 2);
    let p = write(&dir, "q.json", r#"{"n": 2, "r_e": 2, "r_f": 2, "r": 1, "extra": 1}"#);
    assert_eq!(code(&detloci(&["chern", "solve", "--input", &p])), 2);
}

#[test]
fn reports_are_byte_identical_without_timestamps() {
    let args = ["chern", "suite", "--suite", "whitney", "--trials", "30", "--no-timestamp"];
    let a = detloci(&args);
    let b = detloci(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let sharded = detloci(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(a.stdout, sharded.stdout);
}

#[test]
fn out_flag_writes_the_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.csv");
    let o = detloci(&[
        "grassmann", "suite", "--suite", "cauchy_binet", "--trials", "20", "--format", "csv", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("suite,seed,trials,failures,worst_margin"));
    assert_eq!(text.lines().count(), 2);
}

fn injected_run(dir: &TempDir) -> (Output, String) {
    let report = dir.path().join("report.json");
    let o = detloci(&[
        "angles", "--suite", "vari_min", "--trials", "20", "--inject-failure", "11", "--no-timestamp", "--out",
        report.to_str().unwrap(),
    ]);
    (o, report.to_str().unwrap().to_string())
}

#[test]
fn injected_failure_replays_identically() {
    let dir = TempDir::new().unwrap();
    let (o, report) = injected_run(&dir);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let blob = &v["first_counterexample"];
    assert_eq!(blob["trial"], 11);
    let blob_path = write(&dir, "blob.json", &blob.to_string());
    let r = detloci(&["replay", "--input", &blob_path]);
    assert_eq!(code(&r), 1);
    let again = stdout_json(&r);
    assert_eq!(again["first_counterexample"]["values"], blob["values"]);
    assert_eq!(again["first_counterexample"]["inputs"], blob["inputs"]);
    // The whole report is accepted as well.
    assert_eq!(code(&detloci(&["replay", "--input", &report])), 1);
}

#[test]
fn replay_rejects_altered_seed_and_schema() {
    let dir = TempDir::new().unwrap();
    let (_, report) = injected_run(&dir);
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let mut blob = v["first_counterexample"].clone();
    blob["seed"] = Value::from(12345u64);
    let p = write(&dir, "seed.json", &blob.to_string());
    assert_eq!(code(&detloci(&["replay", "--input", &p])), 2);
    let mut blob = v["first_counterexample"].clone();
    blob["schema_version"] = Value::from(99);
    let p = write(&dir, "schema.json", &blob.to_string());
    assert_eq!(code(&detloci(&["replay", "--input", &p])), 2);
}

#[test]
fn replay_of_a_passing_trial_passes() {
    let dir = TempDir::new().unwrap();
    let (_, report) = injected_run(&dir);
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let mut blob = v["first_counterexample"].clone();
    blob["injected"] = Value::Bool(false);
    let p = write(&dir, "pass.json", &blob.to_string());
    let o = detloci(&["replay", "--input", &p]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["failures"], 0);
}

#[test]
fn angle_measurements_of_a_pair() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "pair.json",
        r#"{"u": {"ambient_dim": 3, "basis": [[1, 0, 0], [0, 1, 0]]},
            "v": {"ambient_dim": 3, "basis": [[1, 0, 0], [0, 0, 1]]}}"#,
    );
    let o = detloci(&["angles", "--input", &p]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    let half_pi = std::f64::consts::FRAC_PI_2;
    assert!((v["max_angle_uv"].as_f64().unwrap() - half_pi).abs() < 1e-12);
    assert!((v["min_angle"].as_f64().unwrap() - half_pi).abs() < 1e-12);
    assert_eq!(v["intersection_dim"], 1);
    assert_eq!(v["transversal"], true);
}

#[test]
fn grassmann_point_commands() {
    let dir = TempDir::new().unwrap();
    let m = write(
        &dir,
        "m.json",
        r#"{"rows": 2, "cols": 4, "entries": [[1,0],[0,0],[2,0],["1/2",0],[0,0],[1,0],[3,0],[0,1]]}"#,
    );
    let o = detloci(&["grassmann", "pluecker", "--input", &m, "--rational"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["coords"].as_array().unwrap().len(), 6);
    assert_eq!(v["nonzero_relations"], 0);
    assert_eq!(v["coords"][0], serde_json::json!(["1", "0"]));

    let o = detloci(&["grassmann", "chart", "--input", &m]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!((v["rows"].as_u64(), v["cols"].as_u64()), (Some(2), Some(2)));

    let o = detloci(&["grassmann", "compound", "--input", &m, "--order", "2", "--rational"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["cols"], 6);
    assert_eq!(code(&detloci(&["grassmann", "compound", "--input", &m, "--order", "3"])), 2);
}

#[test]
fn grassmann_distance_and_curvature() {
    let dir = TempDir::new().unwrap();
    let d = write(
        &dir,
        "d.json",
        r#"{"p": {"rows": 1, "cols": 2, "entries": [[1,0],[0,0]]},
            "q": {"rows": 1, "cols": 2, "entries": [[0,0],[1,0]]}}"#,
    );
    let o = detloci(&["grassmann", "distance", "--input", &d]);
    assert_eq!(code(&o), 0);
    let dist = stdout_json(&o)["distance"].as_f64().unwrap();
    assert!((dist - std::f64::consts::FRAC_PI_2).abs() < 1e-12);

    let t = write(&dir, "t.json", r#"{"rows": 2, "cols": 2, "entries": [[1,0],[0,0],[0,0],[0,1]]}"#);
    let o = detloci(&["grassmann", "curvature", "--input", &t]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert!(v["sample"]["spectrum"].as_array().unwrap().iter().all(|x| x.as_f64().unwrap() <= 1e-10));
    assert!(v["sample"]["determinant_curvature"].as_f64().unwrap() < 0.0);
}

#[test]
fn non_tabular_commands_refuse_csv() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.json", r#"{"n": 2, "r_e": 2, "r_f": 2, "r": 1}"#);
    assert_eq!(code(&detloci(&["chern", "solve", "--input", &p, "--format", "csv"])), 2);
}

#[test]
fn bad_global_flags_are_usage_errors() {
    assert_eq!(code(&detloci(&["angles", "--suite", "sub_add", "--tol", "0"])), 2);
    assert_eq!(code(&detloci(&["angles", "--suite", "sub_add", "--trials", "0"])), 2);
    assert_eq!(code(&detloci(&["angles", "--suite", "sub_add", "--seed", "zz"])), 2);
}
