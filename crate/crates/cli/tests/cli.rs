use std::process::{Command, Output};

use serde_json::Value;

fn kit(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_thurston-kit"));
    cmd.args(args);
    match threads {
        Some(n) => cmd.env("THURSTON_KIT_THREADS", n),
        None => cmd.env_remove("THURSTON_KIT_THREADS"),
    };
    cmd.output().expect("spawn thurston-kit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn quad_prints_a_csv_row() {
    let o = kit(
        &[
            "quad",
            "--a",
            "1",
            "--k",
            "1.5",
            "--samples",
            "2000",
            "--points",
            "100",
        ],
        None,
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("base_length,k,case,"));
    assert_eq!(lines.count(), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS"));
}

#[test]
fn metric_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("metric.json");
    let o = kit(
        &[
            "metric",
            "fn:1.0,0.2,1",
            "fn:1.4,-0.3,1",
            "--depth",
            "8",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "metric");
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 4);
    assert!(records.iter().all(|r| r["value"].as_f64().unwrap() >= 0.0));
}

#[test]
fn boundary_mismatch_is_an_input_error() {
    let o = kit(&["metric", "fn:1,0,1", "fn:1,0,2"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn rejects_bad_literals_and_depth() {
    assert_eq!(
        kit(&["metric", "fn:1,0", "fn:1,0,1"], None).status.code(),
        Some(2)
    );
    assert_eq!(
        kit(&["metric", "trace:1,3,3", "trace:3,3,3"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kit(&["counterexample", "--x", "2", "--depth", "0"], None)
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let args = [
        "equality",
        "--b",
        "1",
        "--samples",
        "12",
        "--depth",
        "9",
        "--seed",
        "5",
    ];
    let one = kit(&args, Some("1"));
    let many = kit(&args, Some("3"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stderr, many.stderr);
}

#[test]
fn counterexample_table_has_one_row_per_x() {
    let o = kit(&["counterexample", "--x", "2,10", "--depth", "10"], None);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let col = headers.iter().position(|h| h == "exp_k").unwrap();
    let vals: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap()[col].parse().unwrap())
        .collect();
    assert_eq!(vals.len(), 2);
    assert!(vals[0] < vals[1] && vals[1] < 1.5);
}

#[test]
fn stretch_reports_times() {
    let o = kit(
        &[
            "stretch",
            "fn:1.2,0.3,1",
            "--times",
            "0,0.4",
            "--side",
            "minus",
        ],
        None,
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("t,tau_minus,tau_plus,"));
}
