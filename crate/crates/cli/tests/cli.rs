use std::process::{Command, Output};

use hoftrace_cli::output::{read_csv, CheckRow, CoeffRow, DosRow, SeriesRow, TraceRow};
use serde_json::Value;

fn hoftrace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hoftrace"))
        .args(args)
        .env_remove("HOFTRACE_THREADS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = hoftrace(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn csv_rows<T: for<'de> serde::Deserialize<'de>>(args: &[&str]) -> Vec<T> {
    let out = hoftrace(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    read_csv(out.stdout.as_slice()).expect("valid CSV")
}

#[test]
fn coeffs_quarter_flux() {
    let v = json(&["coeffs", "--p", "1", "--q", "4"]);
    let a: Vec<f64> = v["a"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(a, vec![-1.0, 8.0, -4.0]);
    assert_eq!(v["q"], 4);

    let rows: Vec<CoeffRow> = csv_rows(&["coeffs", "--p", "1", "--q", "4", "--format", "csv"]);
    assert_eq!(
        rows.iter().map(|r| r.order).collect::<Vec<_>>(),
        vec![0, 2, 4]
    );
    assert_eq!(rows[2].a, -4.0);
}

#[test]
fn trace_third_flux() {
    let v = json(&["trace", "--p", "1", "--q", "3", "--n", "4"]);
    assert_eq!(v["trace"].as_f64(), Some(24.0));
    assert_eq!(v["method"], "partition-sum");
    let rec = &v["records"][0];
    let keys: Vec<&str> = rec
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    for k in ["p", "q", "lambda", "kind", "n", "s", "value", "method"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(keys.len(), 8);
}

#[test]
fn trace_table_has_no_single_value() {
    let v = json(&[
        "trace", "--p", "1", "--q", "2", "--lambda", "1", "--n-max", "6",
    ]);
    assert!(v.get("trace").is_none());
    let values: Vec<f64> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"].as_f64().unwrap())
        .collect();
    assert_eq!(values.len(), 7);
    assert_eq!(values[1], 0.0);
    assert!((values[2] - 2.5).abs() < 1e-12);
}

#[test]
fn midband_kind() {
    let v = json(&[
        "trace", "--p", "1", "--q", "3", "--n", "2", "--kind", "mid-band",
    ]);
    assert!((v["trace"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert_eq!(v["records"][0]["kind"], "mid-band");
}

#[test]
fn point_trace_warns_outside_range() {
    let out = hoftrace(&[
        "point-trace",
        "--p",
        "1",
        "--q",
        "2",
        "--n",
        "4",
        "--s",
        "1,9",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
    assert_eq!(v["records"][0]["value"].as_f64(), Some(17.0));
    assert_eq!(v["records"][0]["s"].as_f64(), Some(1.0));
}

#[test]
fn dos_emits_density_and_moments() {
    let v = json(&["dos", "--p", "0", "--q", "1", "--grid", "5"]);
    let density = v["density"].as_array().unwrap();
    assert_eq!(density.len(), 5);
    // the logarithmic divergence at s = 0 is emitted as null
    assert!(density[2]["density"].is_null());
    let edge = density[4]["density"].as_f64().unwrap();
    assert!((edge - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
    let moments: Vec<f64> = v["moments"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["exact"].as_f64().unwrap())
        .collect();
    assert_eq!(moments, vec![1.0, 4.0, 36.0, 400.0, 4900.0, 63504.0]);

    let rows: Vec<DosRow> = csv_rows(&[
        "dos", "--p", "1", "--q", "3", "--lambda", "1", "--s", "-1,0.5", "--format", "csv",
    ]);
    assert_eq!(rows.len(), 2 + 6);
    assert_eq!(rows[0].record, "density");
    assert_eq!(rows[0].x, -1.0);
    assert!(rows[..2]
        .iter()
        .all(|r| r.value > 0.0 && r.value.is_finite()));
    assert!(rows[2..].iter().all(|r| r.record == "moment"));
    assert_eq!(rows[3].x, 2.0);
}

#[test]
fn series_matches_trace() {
    let rows: Vec<SeriesRow> = csv_rows(&[
        "series", "--p", "1", "--q", "2", "--kind", "pm-s", "--s", "1", "--n-max", "4", "--format",
        "csv",
    ]);
    assert_eq!(rows.len(), 5);
    assert!((rows[4].value - 17.0).abs() < 1e-12);
    assert_eq!(rows[0].s, Some(1.0));
}

#[test]
fn verify_passes() {
    let out = hoftrace(&[
        "verify", "--p", "1", "--q", "2", "--lambda", "1", "--n-max", "8",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn verify_reports_precision_loss_at_high_order() {
    // sign cancellation in the partition sums costs ~1e-3 relative at n = 64
    let out = hoftrace(&[
        "verify", "--p", "3", "--q", "7", "--lambda", "3", "--n-max", "64", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let rows: Vec<CheckRow> = read_csv(out.stdout.as_slice()).unwrap();
    assert!(rows.iter().any(|r| !r.passed));
    assert!(rows.iter().any(|r| r.passed));
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        &["trace", "--p", "1", "--q", "0", "--n", "2"][..],
        &[
            "trace", "--p", "1", "--q", "3", "--lambda", "-1", "--n", "2",
        ],
        &["trace", "--p", "1", "--q", "3", "--n", "65"],
        &["trace", "--p", "1", "--q", "3"],
        &["trace", "--p", "1", "--q", "3", "--n", "2", "--n-max", "4"],
        &["frobnicate"],
        &["coeffs", "--p", "x", "--q", "3"],
        &["series", "--p", "1", "--q", "3", "--n-max", "100"],
    ] {
        let out = hoftrace(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert!(hoftrace(&["--help"]).status.success());
    assert!(hoftrace(&["--version"]).status.success());
    assert!(hoftrace(&["trace", "--help"]).status.success());
}

#[test]
fn output_file_and_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traces.csv");
    let path_str = path.to_str().unwrap();
    let out = hoftrace(&[
        "point-trace",
        "--p",
        "2",
        "--q",
        "5",
        "--lambda",
        "0.7",
        "--n-max",
        "10",
        "--s",
        "0,0.3,-2",
        "--format",
        "csv",
        "--output",
        path_str,
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read(&path).unwrap();
    let rows: Vec<TraceRow> = read_csv(text.as_slice()).unwrap();
    assert_eq!(rows.len(), 33);
    let mut again = Vec::new();
    hoftrace_cli::output::write_csv(&rows, &mut again).unwrap();
    assert_eq!(again, text);
}

#[test]
fn json_and_csv_agree_bit_for_bit() {
    let v = json(&[
        "trace", "--p", "3", "--q", "8", "--lambda", "1.3", "--n-max", "12",
    ]);
    let rows: Vec<TraceRow> = csv_rows(&[
        "trace", "--p", "3", "--q", "8", "--lambda", "1.3", "--n-max", "12", "--format", "csv",
    ]);
    for (r, j) in rows.iter().zip(v["records"].as_array().unwrap()) {
        assert_eq!(r.value.to_bits(), j["value"].as_f64().unwrap().to_bits());
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let args = [
        "trace", "--p", "2", "--q", "9", "--lambda", "1.7", "--n-max", "40", "--format", "csv",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_hoftrace"))
            .args(args)
            .env("HOFTRACE_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);

    let bad = run("zero");
    assert_eq!(bad.status.code(), Some(1));
}
