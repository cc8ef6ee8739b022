use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn gtdistrict(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtdistrict")).args(args).current_dir(dir).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const HALF: &str = r#"{"m": 2, "densities": {"1": [["0", "1", "1/2"]], "2": [["0", "1", "1/2"]]}}"#;
const THREE_TENTHS: &str = r#"{"m": 10, "densities": {
    "1": [["0", "3/10", "1"], ["3/10", "1", "0"]],
    "2": [["0", "3/10", "0"], ["3/10", "1", "1"]]}}"#;

#[test]
fn protocol_on_constant_half() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "half.json", HALF);
    let out = gtdistrict(&["protocol", "half.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    for party in v["report"].as_array().unwrap() {
        assert_eq!(party["target"], 1);
        assert!(party["achieved"].as_u64().unwrap() >= 1);
    }
}

#[test]
fn protocol_on_three_tenths_reports_both_targets() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "i.json", THREE_TENTHS);
    let out = gtdistrict(&["protocol", "i.json", "-o", "trace.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("trace.json")).unwrap()).unwrap();
    let targets: Vec<u64> = v["report"].as_array().unwrap().iter().map(|r| r["target"].as_u64().unwrap()).collect();
    assert_eq!(targets, vec![3, 7]);
    assert!(v["trace"]["checks"].as_array().unwrap().iter().all(|c| c["holds"] == true));
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "bad.json", "{\"m\": 2, ");
    let out = gtdistrict(&["protocol", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(gtdistrict(&["targets", "missing.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn targets_command() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "i.json", THREE_TENTHS);
    let out = gtdistrict(&["targets", "i.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["m_i"], 6);
    assert_eq!((v[0]["min"].as_u64(), v[0]["max"].as_u64()), (Some(0), Some(6)));
    assert_eq!((v[1]["min"].as_u64(), v[1]["max"].as_u64(), v[1]["target"].as_u64()), (Some(4), Some(10), Some(7)));
}

fn gridgen(dir: &Path, name: &str, extra: &[&str]) {
    let mut args = vec!["gridgen", "-o", name];
    args.extend_from_slice(extra);
    assert_eq!(gtdistrict(&args, dir).status.code(), Some(0));
}

#[test]
fn gridgen_outputs() {
    let dir = TempDir::new().unwrap();
    gridgen(dir.path(), "g.json", &["--rows", "2", "--cols", "2", "--m", "2", "--pattern", "uniform"]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("g.json")).unwrap()).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 4);
    assert_eq!(v["edges"].as_array().unwrap().len(), 4);
    assert!(v["nodes"].as_array().unwrap().iter().all(|n| n["pop"] == 100));

    let clustered = ["--rows", "8", "--cols", "8", "--m", "4", "--pattern", "clustered:3", "--seed", "17"];
    gridgen(dir.path(), "a.json", &clustered);
    gridgen(dir.path(), "b.json", &clustered);
    let read = |n: &str| std::fs::read(dir.path().join(n)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
}

#[test]
fn ensemble_header_only_and_reproducible() {
    let dir = TempDir::new().unwrap();
    gridgen(dir.path(), "g.json", &[]);
    let out = gtdistrict(&["ensemble", "g.json", "--steps", "10", "--burn-in", "10", "--out-dir", "empty"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("empty/records.csv")).unwrap();
    assert_eq!(csv, "sample,seats_1,seats_2,eg,competitive,pp_mean,gt\n");

    for run in ["a", "b"] {
        let args = ["ensemble", "g.json", "--steps", "200", "--burn-in", "20", "--seed", "5", "--out-dir", run];
        assert_eq!(gtdistrict(&args, dir.path()).status.code(), Some(0));
    }
    let read = |p: &str| std::fs::read(dir.path().join(p)).unwrap();
    assert_eq!(read("a/records.csv"), read("b/records.csv"));
    assert_eq!(read("a/summary.json"), read("b/summary.json"));
    let summary: Value = serde_json::from_slice(&read("a/summary.json")).unwrap();
    assert!(summary["run"]["rng"].as_str().unwrap().contains("ChaCha8"));
    assert_eq!(summary["run"]["samples"], 180);
}

#[test]
fn ensemble_single_deviation() {
    let dir = TempDir::new().unwrap();
    gridgen(dir.path(), "g.json", &["--pattern", "gradient:0.5:0.5"]);
    let args = ["ensemble", "g.json", "--steps", "100", "--burn-in", "0", "--deviate", "1:uniform:-20", "--out-dir", "o"];
    assert_eq!(gtdistrict(&args, dir.path()).status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("o/deviation.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("1,uniform,-20,"));
}

#[test]
fn ensemble_exit_codes() {
    let dir = TempDir::new().unwrap();
    let disconnected = r#"{"m": 1, "nodes": [
        {"id": 0, "pop": 1, "area": 1, "perimeter": 4, "exterior": 4, "votes": {"t": {"1": 1, "2": 0}}},
        {"id": 1, "pop": 1, "area": 1, "perimeter": 4, "exterior": 4, "votes": {"t": {"1": 0, "2": 1}}}],
        "edges": []}"#;
    write(dir.path(), "d.json", disconnected);
    assert_eq!(gtdistrict(&["ensemble", "d.json", "--out-dir", "o"], dir.path()).status.code(), Some(2));

    gridgen(dir.path(), "five.json", &["--rows", "1", "--cols", "5", "--m", "2", "--epsilon", "0"]);
    let out = gtdistrict(&["ensemble", "five.json", "--steps", "5", "--burn-in", "0", "--out-dir", "o"], dir.path());
    assert_eq!(out.status.code(), Some(4));

    gridgen(dir.path(), "g.json", &[]);
    let out = gtdistrict(&["ensemble", "g.json", "--truth", "nope", "--out-dir", "o"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    gridgen(dir.path(), "g.json", &[]);
    write(dir.path(), "run.toml", "[ensemble]\nsteps = 40\nburn_in = 0\nseed = 2\nout_dir = \"cfg\"\n");
    let out = gtdistrict(&["--config", "run.toml", "ensemble", "g.json", "--steps", "15"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("cfg/records.csv")).unwrap();
    assert_eq!(csv.lines().count(), 16);

    write(dir.path(), "bad.toml", "[ensemble]\nstep = 3\n");
    let out = gtdistrict(&["--config", "bad.toml", "ensemble", "g.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
