//! End-to-end checks of the binary: flag grammar, exit codes, output
//! encodings, and the worked examples with known closed forms.

use std::process::{Command, Output};

fn ppp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppp"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_of(args: &[&str]) -> String {
    let out = ppp(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("output should be utf8")
}

/// Data rows of a CSV table, split into raw fields.
fn rows_of(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|line| line.split(',').map(str::to_string).collect())
        .collect()
}

fn field(row: &[String], k: usize) -> f64 {
    row[k].parse().unwrap_or_else(|_| panic!("bad float `{}`", row[k]))
}

#[test]
fn help_prints_the_grammar() {
    let out = ppp(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["prices", "gap", "bounds", "exante", "lowerbound", "welfare", "simulate", "reproduce"] {
        assert!(text.contains(name), "help lost subcommand {name}");
    }
}

#[test]
fn unknown_flags_exit_with_usage_status() {
    let out = ppp(&["gap", "--dist", "uniform:0,1", "--n", "2", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn computation_errors_exit_with_status_one() {
    let out = ppp(&["gap", "--dist", "nonsense:1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error:"), "stderr was: {err}");
}

#[test]
fn missing_discrete_csv_reports_the_path() {
    let out = ppp(&["gap", "--dist", "discrete:/no/such/file.csv", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("/no/such/file.csv"), "stderr was: {err}");
}

#[test]
fn two_buyer_uniform_prices_match_the_closed_form() {
    let text = stdout_of(&["prices", "--dist", "uniform:0,1", "--n", "2", "--format", "json"]);
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = parsed.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let p1 = rows[0]["price"].as_f64().unwrap();
    let p2 = rows[1]["price"].as_f64().unwrap();
    let revenue = rows[0]["value_to_go"].as_f64().unwrap();
    assert!((p1 - 0.625).abs() < 1e-9, "first price {p1}");
    assert!((p2 - 0.5).abs() < 1e-9, "second price {p2}");
    assert!((revenue - 0.390625).abs() < 1e-12, "revenue {revenue}");
}

#[test]
fn bounds_json_carries_both_closed_forms() {
    let text = stdout_of(&["bounds", "--n", "2", "--format", "json"]);
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    let row = &parsed.as_array().unwrap()[0];
    assert_eq!(row["general"].as_f64().unwrap(), 1.5);
    assert!((row["regular"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-15);
}

#[test]
fn csv_floats_carry_seventeen_significant_digits() {
    let text = stdout_of(&["bounds", "--n", "3"]);
    let row = &rows_of(&text)[0];
    let regular = field(row, 2);
    assert_eq!(format!("{regular:.16e}"), row[2], "not a shortest 17-digit form");
    assert!((regular - 1.0 / (1.0 - (2.0f64 / 3.0).powi(3))).abs() < 1e-15);
}

#[test]
fn reproduce_output_is_byte_stable() {
    let first = ppp(&["reproduce", "uniform-gap"]);
    let second = ppp(&["reproduce", "uniform-gap"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn output_flag_writes_the_same_bytes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bounds.csv");
    let piped = stdout_of(&["bounds", "--n", "1", "--n-max", "5"]);
    let out = ppp(&["bounds", "--n", "1", "--n-max", "5", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), piped);
}

#[test]
fn discrete_csv_files_round_trip_through_gap() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two_point.csv");
    std::fs::write(&path, "value,prob\n1,0.875\n20,0.125\n").unwrap();
    let text = stdout_of(&["gap", "--dist", &format!("discrete:{}", path.display()), "--n", "2"]);
    let row = &rows_of(&text)[0];
    assert_eq!(field(row, 1), 4.6875);
    assert_eq!(field(row, 2), 4.6875);
    assert_eq!(field(row, 3), 5.0);
    assert_eq!(row[7], "", "irregular input must leave the regular cap empty");
    assert_eq!(&row[8..11], ["enumerated", "enumerated", "enumerated"]);
}

#[test]
fn restricted_exante_matches_the_uniform_example() {
    let text = stdout_of(&["exante", "--dist", "uniform:0,1", "--n", "2", "--prices", "0.625,0.5"]);
    let rows = rows_of(&text);
    assert_eq!(field(&rows[0], 1), 0.375);
    assert_eq!(field(&rows[1], 1), 0.5);
    assert_eq!(field(&rows[0], 4), 0.484375);
}

#[test]
fn welfare_table_ends_with_a_priceless_row() {
    let text = stdout_of(&["welfare", "--dist", "uniform:0,1", "--n", "3"]);
    let rows = rows_of(&text);
    assert_eq!(rows.len(), 4);
    let welfare: Vec<f64> = rows.iter().map(|r| field(r, 1)).collect();
    assert_eq!(welfare, [0.0, 0.5, 0.625, 0.6953125]);
    assert_eq!(rows[3][2], "");
    assert_eq!(field(&rows[2], 2), 0.625);
}

#[test]
fn lowerbound_ratio_stays_under_its_cap() {
    let text = stdout_of(&["lowerbound", "--family", "regular", "--n", "2", "--eps", "0.001"]);
    let row = &rows_of(&text)[0];
    let ratio = field(row, 5);
    let bound = field(row, 6);
    assert!(ratio < bound, "ratio {ratio} should undercut the cap {bound}");
    assert!(bound - ratio < 0.01, "eps=1e-3 should get within 0.01 of the cap");
}

#[test]
fn simulation_runs_are_reproducible_and_tagged() {
    let args = [
        "simulate", "--dist", "exp:1", "--prices", "1.2,0.8",
        "--trials", "20000", "--seed", "42",
    ];
    let first = stdout_of(&args);
    let second = stdout_of(&args);
    assert_eq!(first, second);
    let row = &rows_of(&first)[0];
    assert_eq!(row[1], "20000");
    assert_eq!(row[2], "42");
    assert_eq!(row[3], "chacha8");
    assert_eq!(row[6], "simulated");
    assert!(field(row, 4) > 0.0 && field(row, 5) > 0.0);
}

#[test]
fn thread_cap_rejects_garbage_and_accepts_counts() {
    let bad = Command::new(env!("CARGO_BIN_EXE_ppp"))
        .args(["bounds", "--n", "2"])
        .env("PPP_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let good = Command::new(env!("CARGO_BIN_EXE_ppp"))
        .args(["bounds", "--n", "2"])
        .env("PPP_THREADS", "2")
        .output()
        .unwrap();
    assert!(good.status.success());
}

#[test]
fn unrestricted_exante_leaves_unserved_slots_priceless() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("skewed.csv");
    std::fs::write(&path, "value,prob\n1,0.125\n20,0.875\n").unwrap();
    let text = stdout_of(&["exante", "--dist", &format!("discrete:{}", path.display()), "--n", "3"]);
    let rows = rows_of(&text);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let q = field(row, 1);
        assert_eq!(q == 0.0, row[2].is_empty(), "price must be empty exactly when q = 0");
    }
    let total: f64 = field(&rows[0], 4);
    let sum: f64 = rows.iter().map(|r| field(r, 3)).sum();
    assert!((sum - total).abs() < 1e-9, "contributions {sum} vs total {total}");
}
