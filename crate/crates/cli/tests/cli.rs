use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foliation-lab")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, body).unwrap();
    p
}

fn run_suite(suite: &str, config: &str, extra: &[&str]) -> (Output, Option<Value>) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), config);
    let out = dir.path().join("report.json");
    let mut args = vec![suite, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = lab(&args);
    let report = std::fs::read(&out).ok().map(|b| serde_json::from_slice(&b).unwrap());
    (o, report)
}

#[test]
fn jets_commutator_vanishes_below_k() {
    let (o, report) = run_suite("verify-jets", r#"{"k_values": [2], "max_jet_order": 3}"#, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = report.unwrap();
    assert_eq!(report["passed"], true);
    let rows = report["data"]["commutativity"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let order = row["order"].as_u64().unwrap();
        let norm = row["max_norm"].as_f64().unwrap();
        if order < 2 {
            assert!(norm <= 1e-10, "order {order}: {norm}");
        } else {
            assert!(norm > 1e-3, "order {order}: {norm}");
        }
    }
}

#[test]
fn index_of_generator() {
    let (o, report) = run_suite("index", "{}", &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let reports = report.unwrap()["data"]["index_reports"].as_array().unwrap().clone();
    let generator = reports.iter().find(|r| r["symbol_id"] == "1 - b").unwrap();
    assert_eq!(generator["winding"], 1);
    assert_eq!(generator["boundary_index"], -1);
}

#[test]
fn classify_parity() {
    let (o, report) = run_suite("classify", r#"{"k_values": [1, 2, 3, 4]}"#, &[]);
    assert_eq!(o.status.code(), Some(0));
    for r in report.unwrap()["data"]["bi_index"].as_array().unwrap() {
        let k = r["k"].as_i64().unwrap();
        assert_eq!(r["parity_invariant"].as_i64().unwrap().abs(), 2 * (k % 2));
    }
}

#[test]
fn missing_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = lab(&["classify", "--config", "/nonexistent/config.json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn malformed_inputs_are_usage_errors() {
    let (o, report) = run_suite("classify", r#"{"k_values": [1], "bogus": 3}"#, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(report.is_none());
    let (o, _) = run_suite("classify", "{}", &["--override", "grid.nope=1"]);
    assert_eq!(o.status.code(), Some(2));
    let (o, _) = run_suite("classify", "{}", &["--override", "k_values=[0]"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lab(&["no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn overrides_take_precedence() {
    let (o, report) = run_suite(
        "classify",
        r#"{"k_values": [1, 2], "seed": 3}"#,
        &["--override", "k_values=[5]", "--override", "tolerances.quadrature=1e-7"],
    );
    assert_eq!(o.status.code(), Some(0));
    let report = report.unwrap();
    assert_eq!(report["config"]["k_values"], serde_json::json!([5]));
    assert_eq!(report["config"]["seed"], 3);
    assert_eq!(report["config"]["tolerances"]["quadrature"], 1e-7);
}

#[test]
fn failing_check_exits_one_with_report() {
    let (o, report) =
        run_suite("verify-flow", r#"{"k_values": [2], "max_jet_order": 2}"#, &["--override", "tolerances.equality=1e-300"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(report.unwrap()["passed"], false);
}

#[test]
fn bad_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "{}");
    let out = dir.path().join("r.json");
    let o = Command::new(env!("CARGO_BIN_EXE_foliation-lab"))
        .args(["classify", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .env("FOLIATION_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_and_dumps_are_deterministic() {
    let config = r#"{"k_values": [1, 3], "max_jet_order": 3, "trials": 4, "seed": 11}"#;
    let mut seen = vec![];
    for threads in ["1", "2"] {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write_config(dir.path(), config);
        let out = dir.path().join("r.json");
        let dump = dir.path().join("dump");
        let o = Command::new(env!("CARGO_BIN_EXE_foliation-lab"))
            .args(["verify-coeff", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
            .args(["--dump", dump.to_str().unwrap()])
            .env("FOLIATION_LAB_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        let mut report: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
        report.as_object_mut().unwrap().remove("wall_time_s");
        let csv = std::fs::read(dump.join("coeff_fg.csv")).unwrap();
        seen.push((report, csv));
    }
    assert_eq!(seen[0], seen[1]);
}
