use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semicross"))
}

fn catalog(id: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("catalog")
        .join(format!("{id}.json"))
}

fn run(args: &[&str], config: &Path) -> Output {
    bin()
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--no-timestamp")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn every_catalog_config_validates() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("catalog");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let out = run(&["validate"], &path);
        assert!(
            out.status.success(),
            "{}: {}",
            path.display(),
            String::from_utf8_lossy(&out.stderr)
        );
        count += 1;
    }
    assert!(count >= 10);
}

#[test]
fn out_of_range_edge_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"alphabet_size": 2, "edges": [[0, 0], [0, 1], [1, 2]]}"#,
    )
    .unwrap();
    let out = run(&["validate"], &path);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("bad.json") && err.contains("edges[2]"),
        "{err}"
    );
}

#[test]
fn malformed_json_and_missing_config_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"alphabet_size\": 2,").unwrap();
    assert_eq!(run(&["validate"], &path).status.code(), Some(2));
    let out = bin().arg("validate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_element_names_the_config() {
    let out = run(&["norm", "nope"], &catalog("full2"));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("full2.json") && err.contains("elements.nope"),
        "{err}"
    );
}

#[test]
fn analyze_full_shift_table_agrees() {
    let out = run(&["analyze"], &catalog("full2"));
    assert!(out.status.success());
    let r = report(&out);
    let rows = r["results"]["transfer"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|row| row["agreement"] == true));
    assert_eq!(r["results"]["all_agree"], true);
    assert_eq!(r["command"], "analyze");
    assert!(r.get("timestamp").is_none());
}

#[test]
fn norm_one_plus_u_reaches_two() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("history.csv");
    let out = bin()
        .args(["norm", "onePlusU", "--no-timestamp", "--config"])
        .arg(catalog("full2"))
        .arg("--csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(&out);
    let history = r["diagnostics"]["K_history"]["norm"].as_array().unwrap();
    let last = history.last().unwrap();
    assert_eq!(last[0], 512);
    assert!(last[1].as_f64().unwrap() >= 1.99);
    assert!(r["results"]["estimate"]["value"].as_f64().unwrap() <= 2.0 + 1e-9);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("series,k,value\n"));
    assert!(text.contains("\nnorm,512,"));
}

#[test]
fn single_stage_is_not_converged() {
    let out = run(&["norm", "U", "--k-max", "16"], &catalog("golden"));
    assert_eq!(out.status.code(), Some(3));
    // the report is still written
    assert_eq!(report(&out)["results"]["estimate"]["converged"], false);
}

#[test]
fn strict_exhaustive_search_overflows() {
    let out = run(
        &["norm", "onePlusU", "--mode", "exhaustive", "--k-max", "64"],
        &catalog("full2"),
    );
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("beam"));
}

#[test]
fn bad_mode_flag_is_rejected() {
    let out = run(&["norm", "U", "--mode", "beam:0"], &catalog("full2"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn timestamp_is_present_by_default() {
    let out = bin()
        .args(["validate", "--config"])
        .arg(catalog("cycle2"))
        .output()
        .unwrap();
    assert!(report(&out)["timestamp"].as_u64().unwrap() > 0);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("r{i}.json"));
        let out = bin()
            .args(["envelope", "--no-timestamp", "--k-max", "32", "--config"])
            .arg(catalog("golden"))
            .arg("--out")
            .arg(&path)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        bytes.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
}

#[test]
fn extend_and_verify_run() {
    let out = run(&["extend"], &catalog("golden"));
    assert!(out.status.success());
    let fibers = &report(&out)["results"]["fibers"];
    assert_eq!(fibers["spike"]["projection_matches"], true);

    let out = run(&["verify", "--k-max", "64"], &catalog("full2"));
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(&out);
    assert_eq!(r["results"]["lemma_violations"], 0);
    assert_eq!(r["results"]["covariance"]["exact"], true);
    assert_eq!(r["results"]["nest"]["thue-morse"]["verified"], true);
    assert_eq!(r["results"]["nest"]["alternating"]["verified"], false);
}
