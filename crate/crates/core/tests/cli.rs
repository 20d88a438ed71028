//! End-to-end runs of the `motzkin` binary.

use std::path::Path;
use std::process::{Command, Output};

fn motzkin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motzkin"))
        .args(args)
        .env("MOTZKIN_WORKERS", "1")
        .output()
        .expect("binary runs")
}

/// Data rows of a CSV report as `(column, field)` pairs.
fn records(text: &str) -> Vec<Vec<(String, String)>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    reader
        .records()
        .map(|r| header.iter().cloned().zip(r.unwrap().iter().map(String::from)).collect())
        .collect()
}

fn field<'a>(row: &'a [(String, String)], name: &str) -> &'a str {
    &row.iter().find(|(k, _)| k == name).unwrap_or_else(|| panic!("no column {name}")).1
}

#[test]
fn smallest_gap_is_one() {
    let out = motzkin(&["gap", "--n", "1", "--s", "1", "--t", "2.0"]);
    assert!(out.status.success());
    let rows = records(&String::from_utf8(out.stdout).unwrap());
    let gap: f64 = field(&rows[0], "gap").parse().unwrap();
    assert!((gap - 1.0).abs() < 1e-12);
    assert_eq!(field(&rows[0], "relation_pass"), "true");
}

#[test]
fn markov_verify_passes() {
    let out = motzkin(&["markov-verify", "--n", "3", "--s", "2", "--t", "1.5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = records(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(field(&rows[0], "identities_pass"), "true");
    assert_eq!(field(&rows[0], "relation_pass"), "true");
}

#[test]
fn theorem_scan_reports_slope() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = motzkin(&["theorem-scan", "--s", "2", "--t", "2", "--n", "2..4", "--out", d]);
    assert!(out.status.success());
    let rows = std::fs::read_to_string(dir.path().join("theorem-scan.rows.csv")).unwrap();
    let rows = records(&rows);
    assert_eq!(rows.len(), 3);
    let bounds: Vec<f64> = rows.iter().map(|r| field(r, "bound").parse().unwrap()).collect();
    assert!(bounds.windows(2).all(|w| w[1] < w[0]));
    let fit = std::fs::read_to_string(dir.path().join("theorem-scan.fit.csv")).unwrap();
    assert_eq!(field(&records(&fit)[0], "slope_ok"), "true");
}

#[test]
fn missing_output_directory_is_an_error() {
    let out = motzkin(&["count", "--n", "2", "--s", "2", "--out", "/nonexistent/motzkin/out"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not exist"));
}

#[test]
fn bad_arguments_fail() {
    assert!(!motzkin(&["gap", "--n", "2", "--s", "2"]).status.success());
    assert!(!motzkin(&["gap", "--n", "5..2", "--s", "2", "--t", "2"]).status.success());
    assert!(!motzkin(&["count", "--n", "2", "--s", "2", "--format", "xml"]).status.success());
}

#[test]
fn hard_failure_sets_exit_code_one() {
    let out = motzkin(&["gap", "--n", "3", "--s", "2", "--t", "1.5", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL gap"));
}

#[test]
fn non_stochastic_chain_is_an_error() {
    // At t = 0.2 the decreasing rate 1/(2nst²) exceeds one.
    let out = motzkin(&["markov-verify", "--n", "2", "--s", "1", "--t", "0.2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("negative"));
}

fn run_to(dir: &Path, args: &[&str]) {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", dir.to_str().unwrap()]);
    let out = motzkin(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["mcmc", "--n", "3", "--s", "2", "--t", "2", "--steps", "20000", "--seed", "7"];
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_to(a.path(), &args);
    run_to(b.path(), &args);
    for name in ["mcmc.summary.csv", "mcmc.trace.n3_s2_t2.csv"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
}

#[test]
fn json_and_csv_carry_identical_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["cheeger", "--n", "3", "--s", "2", "--t", "1.5"];
    run_to(dir.path(), &args);
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    run_to(dir.path(), &json_args);

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cheeger.json")).unwrap()).unwrap();
    assert_eq!(json["passed"], true);
    for table in ["summary", "lemmas", "defects"] {
        let csv = std::fs::read_to_string(dir.path().join(format!("cheeger.{table}.csv"))).unwrap();
        assert!(csv.contains("# config_hash: "));
        let rows = records(&csv);
        let recs = json["tables"][table].as_array().unwrap();
        assert_eq!(rows.len(), recs.len());
        for (row, rec) in rows.iter().zip(recs) {
            for (k, v) in row {
                let j = &rec[k.as_str()];
                match (v.parse::<f64>(), j.as_f64()) {
                    (Ok(a), Some(b)) => assert_eq!(a.to_bits(), b.to_bits(), "{table}.{k}"),
                    _ => {
                        let text = j.as_str().map(String::from).unwrap_or_else(|| j.to_string());
                        assert_eq!(v, &text, "{table}.{k}");
                    }
                }
            }
        }
    }
}

#[test]
fn export_writes_coordinate_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = motzkin(&["markov-verify", "--n", "2", "--s", "1", "--t", "2", "--export", d]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("p_n2_s1_t2.coo")).unwrap();
    let mut row_sums = [0.0f64; 9];
    for line in text.lines().filter(|l| !l.starts_with('%') && !l.starts_with('#')) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() == 3 {
            let r: usize = parts[0].parse().unwrap();
            row_sums[r] += parts[2].parse::<f64>().unwrap();
        }
    }
    assert!(row_sums.iter().all(|s| (s - 1.0).abs() < 1e-12), "{row_sums:?}");
}
