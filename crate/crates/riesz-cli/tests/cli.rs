//! Black-box tests of the `riesz` binary: exit codes, output shapes,
//! dump files, and byte-identical determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn riesz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riesz"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn temp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("riesz-cli-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn usage_errors_exit_with_2() {
    assert_eq!(riesz(&[]).status.code(), Some(2));
    assert_eq!(riesz(&["nosuchcommand"]).status.code(), Some(2));
    assert_eq!(riesz(&["coeffs", "--family", "kappa9", "--alpha", "1.5", "--count", "3"])
        .status
        .code(), Some(2));
    // Validation failures behind the parser also exit with 2.
    assert_eq!(
        riesz(&["coeffs", "--family", "kappa2", "--alpha", "2.5", "--count", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        riesz(&["coeffs", "--family", "kappa2", "--alpha", "1.5", "--count", "3", "--p", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        riesz(&["deriv", "--formula", "f7", "--alpha", "1.5", "--h", "0.05", "--at", "0.3137"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        riesz(&["table", "--id", "7"]).status.code(),
        Some(2),
        "unknown table id"
    );
}

#[test]
fn resource_cap_exits_with_3() {
    let output =
        riesz(&["solve1d", "--alpha", "1.5", "--M", "5000", "--N", "1"]);
    assert_eq!(output.status.code(), Some(3));
    let stderr = String::from_utf8(output.stderr).expect("utf-8 stderr");
    assert!(stderr.contains("cap"), "unhelpful message: {stderr}");
}

#[test]
fn coeffs_outputs_match_the_requested_shape() {
    let csv = riesz(&[
        "coeffs", "--family", "kappa2", "--alpha", "1.5", "--count", "5",
    ]);
    assert_eq!(csv.status.code(), Some(0));
    let text = stdout_of(&csv);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "index,value");
    assert_eq!(lines.len(), 6);
    let head: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((head - (2.5f64 / 3.0).powf(1.5)).abs() < 1e-14);

    let json = riesz(&[
        "coeffs", "--family", "mu", "--alpha", "1.3", "--p", "2", "--s", "-1",
        "--count", "4", "--format", "json",
    ]);
    assert_eq!(json.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&json)).unwrap();
    assert_eq!(doc["family"], "mu");
    assert_eq!(doc["values"].as_array().unwrap().len(), 4);

    // The mu(2, -1) table is the kappa2 table.
    let named = riesz(&["coeffs", "--family", "kappa2", "--alpha", "1.3", "--count", "4"]);
    let named_head: f64 = stdout_of(&named)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(doc["values"][0].as_f64().unwrap(), named_head);
}

#[test]
fn deriv_reports_the_golden_error_cell() {
    let output = riesz(&[
        "deriv", "--formula", "f7", "--alpha", "1.5", "--h", "0.05", "--at", "0.5",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_of(&output);
    let row = text.lines().nth(1).expect("data row");
    let error: f64 = row.split(',').next_back().unwrap().parse().unwrap();
    let golden = 1.377134e-04;
    assert!((error - golden).abs() <= 0.02 * golden, "error column {error}");
}

#[test]
fn solve1d_reports_norms_and_dumps_the_field() {
    let dump = temp_path("solve1d.csv");
    let output = riesz(&[
        "solve1d", "--alpha", "1.5", "--M", "16", "--N", "32",
        "--dump", dump.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_of(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "alpha,M,N,tau,h,max_abs,discrete_l2");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let max_abs: f64 = row[5].parse().unwrap();
    let golden = 4.690789e-08;
    assert!((max_abs - golden).abs() <= 0.02 * golden, "max_abs {max_abs}");

    let dumped = std::fs::read_to_string(&dump).unwrap();
    std::fs::remove_file(&dump).ok();
    let rows: Vec<&str> = dumped.trim_end().lines().collect();
    assert_eq!(rows[0], "x,numeric,exact,error");
    assert_eq!(rows.len(), 1 + 17);
    assert!(rows[1].starts_with("0,0,0,"));
}

#[test]
fn solve2d_reports_norms_and_dumps_the_field() {
    let dump = temp_path("solve2d.csv");
    let output = riesz(&[
        "solve2d", "--alpha", "1.3", "--beta", "1.6", "--Ma", "4", "--Mb", "6",
        "--N", "4", "--dump", dump.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_of(&output);
    assert!(text.starts_with("alpha,beta,Ma,Mb,N,tau,ha,hb,max_abs,discrete_l2\n"));
    let dumped = std::fs::read_to_string(&dump).unwrap();
    std::fs::remove_file(&dump).ok();
    let rows: Vec<&str> = dumped.trim_end().lines().collect();
    assert_eq!(rows[0], "x,y,numeric,exact,error");
    assert_eq!(rows.len(), 1 + 5 * 7);
}

#[test]
fn table_output_is_deterministic_and_parseable() {
    let args =
        ["table", "--id", "2", "--alphas", "1.9", "--max-level", "2"];
    let first = riesz(&args);
    let second = riesz(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "repeated runs must be bit-identical");
    let text = stdout_of(&first);
    assert!(text.starts_with("table,metric,alpha,h,error,order\n"));
    assert_eq!(text.trim_end().lines().count(), 3);

    let json = riesz(&[
        "table", "--id", "2", "--alphas", "1.9", "--max-level", "2", "--format", "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&json)).unwrap();
    assert_eq!(doc["table"], 2);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
    assert!(doc["rows"][1]["order"].is_number());

    let out_file = temp_path("table.csv");
    let written = riesz(&[
        "table", "--id", "2", "--alphas", "1.9", "--max-level", "2",
        "--out", out_file.to_str().unwrap(),
    ]);
    assert_eq!(written.status.code(), Some(0));
    let from_file = std::fs::read(&out_file).unwrap();
    std::fs::remove_file(&out_file).ok();
    assert_eq!(from_file, first.stdout, "--out must write the same bytes");
}

#[test]
fn meshfree_formula_accepts_off_grid_points() {
    let output = riesz(&[
        "deriv", "--formula", "gen", "--alpha", "1.4", "--p", "3", "--s", "0.5",
        "--h", "0.01", "--at", "0.3137",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_of(&output);
    let error: f64 =
        text.lines().nth(1).unwrap().split(',').next_back().unwrap().parse().unwrap();
    assert!(error < 1e-4, "meshfree error {error}");

    // Cross-family flags are rejected.
    assert_eq!(
        riesz(&[
            "deriv", "--formula", "gen", "--alpha", "1.4", "--p", "3", "--s", "0.5",
            "--s1", "-1", "--h", "0.01", "--at", "0.3137",
        ])
        .status
        .code(),
        Some(2)
    );
}
