use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bloch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bloch")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_product(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn constants_pass() {
    let out = bloch(&["constants"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["constants"].as_array().unwrap().iter().all(|row| row["status"] == "PASS"));
}

#[test]
fn tightened_tolerance_fails_check() {
    let out = bloch(&["constants", "--tolerance", "r0=1e-12"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&bloch(&["constants", "--tolerance", "nonsense=1"])), 2);
    assert_eq!(code(&bloch(&["constants", "--tolerance", "r0"])), 2);
    assert_eq!(code(&bloch(&["frobnicate"])), 2);
    assert_eq!(code(&bloch(&["seminorm", "--input", "/nonexistent/product.json"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let outside = write_product(dir.path(), "outside.json", r#"{"zeros": [[1.2, 0.0]]}"#);
    let out = bloch(&["seminorm", "--input", &outside]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bloch:"));
    let garbled = write_product(dir.path(), "garbled.json", "{zeros");
    assert_eq!(code(&bloch(&["analyze", "--input", &garbled])), 2);
}

#[test]
fn help_exits_0() {
    assert_eq!(code(&bloch(&["--help"])), 0);
}

#[test]
fn seminorm_of_square() {
    let dir = tempfile::tempdir().unwrap();
    let square = write_product(dir.path(), "square.json", r#"{"zeros": [[0.0, 0.0], [0.0, 0.0]]}"#);
    let out = bloch(&["seminorm", "--input", &square]);
    assert_eq!(code(&out), 0);
    let value = json(&out)["value"].as_f64().unwrap();
    // ‖z²‖ = 4/(3√3)
    assert!((value - 4.0 / (3.0 * 3f64.sqrt())).abs() < 1e-9, "{value}");
}

#[test]
fn sweep_is_deterministic() {
    let args = ["sweep", "--count", "12", "--max-degree", "4", "--seed", "7", "--threads", "2"];
    let first = bloch(&args);
    let second = bloch(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let single = bloch(&["sweep", "--count", "12", "--max-degree", "4", "--seed", "7", "--threads", "1"]);
    assert_eq!(first.stdout, single.stdout);
    assert_eq!(json(&first)["violations"], 0);
}

#[test]
fn sweep_of_rotations_has_seminorm_one() {
    let out = bloch(&["sweep", "--count", "1", "--max-degree", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((v["min"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((v["max"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn sweep_csv_columns() {
    let out = bloch(&["sweep", "--count", "3", "--max-degree", "3", "--output-format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,degree,law,value,argmax_re,argmax_im"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn theorem4_certifies() {
    let dir = tempfile::tempdir().unwrap();
    let product = write_product(dir.path(), "b.json", r#"{"zeros": [[0.5, 0.1], [-0.3, 0.6], [0.0, -0.7]]}"#);
    let out = bloch(&["theorem4", "--input", &product]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["certified"], true);
    assert!(v["actual_value"].as_f64().unwrap() >= v["guaranteed_bound"].as_f64().unwrap());

    let smaller = json(&bloch(&["theorem4", "--input", &product, "--delta-override", "0.5"]));
    assert_eq!(smaller["hypotheses_hold"], true);
    assert!(smaller["guaranteed_bound"].as_f64().unwrap() < v["guaranteed_bound"].as_f64().unwrap());
    assert_eq!(code(&bloch(&["theorem4", "--input", &product, "--delta-override", "50"])), 2);
}

#[test]
fn analyze_reports_tree() {
    let dir = tempfile::tempdir().unwrap();
    let product = write_product(dir.path(), "b.json", r#"{"zeros": [[0.2, 0.1], [-0.4, 0.3], [0.1, -0.6]]}"#);
    let out = bloch(&["analyze", "--input", &product]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["critical_points"].as_array().unwrap().len(), 2);
    assert_eq!(v["transitive"], true);
    assert_eq!(v["sheet_tree"]["edges"].as_array().unwrap().len(), 2);
}

#[test]
fn surface_writes_convergence_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("convergence.csv");
    let out = bloch(&["surface", "--csv", table.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r0 = json(&out)["r0"].as_f64().unwrap();
    assert!((r0 - 0.695356).abs() < 1e-4, "{r0}");
    let text = std::fs::read_to_string(&table).unwrap();
    assert!(text.starts_with("nodes,"));
    assert!(text.lines().count() > 2);
}
