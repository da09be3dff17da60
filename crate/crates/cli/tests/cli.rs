use std::fs;
use std::process::{Command, Output};

use peerlens_core::scenarios::{criterion_value, Question};
use peerlens_core::{Criterion, ModelSetup};

fn peerlens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_peerlens"))
        .args(args)
        .env_remove("PEERLENS_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = peerlens(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn mars_csv_and_json() {
    let csv = stdout_of(&["mars"]);
    assert!(csv.starts_with("name,value\n"));
    let table = rows(&csv);
    assert_eq!(table.len(), 5);
    let public_rev: f64 = table[4][1].parse().unwrap();
    assert!((public_rev - 0.42).abs() < 1e-9);

    let json: serde_json::Value = serde_json::from_str(&stdout_of(&["mars", "--json"])).unwrap();
    assert!((json["public_inv_life"].as_f64().unwrap() - 0.7).abs() < 1e-9);
}

#[test]
fn landscape_shapes_and_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let curve = rows(&stdout_of(&["landscape", "--mode", "private", "--grid", "3"]));
    assert_eq!(curve.len(), 3);
    assert_eq!(curve[0][1], "0");

    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        stdout_of(&["landscape", "--mode", "public", "--grid", "3", "--out", path.to_str().unwrap()]);
    }
    let text = fs::read(&a).unwrap();
    assert_eq!(text, fs::read(&b).unwrap());
    assert_eq!(rows(std::str::from_utf8(&text).unwrap()).len(), 9);

    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["command"], "landscape");
    assert_eq!(meta["arguments"]["mode"], "public");
    assert_eq!(meta["config"]["landscape_grid"], 3);
}

#[test]
fn simulate_is_seeded() {
    let args = ["simulate", "--criterion", "reviewer-public", "--investigators", "50", "--seed", "7"];
    let first = stdout_of(&args);
    assert_eq!(rows(&first).len(), 50);
    assert_eq!(first, stdout_of(&args));
    let other = stdout_of(&["simulate", "--criterion", "reviewer-public", "--investigators", "50", "--seed", "8"]);
    assert_ne!(first, other);
}

#[test]
fn single_candidate_values_match_the_library() {
    let csv = stdout_of(&[
        "simulate", "--criterion", "investigator-public", "--investigators", "5", "--candidates", "1",
    ]);
    let setup = ModelSetup::default();
    for row in rows(&csv) {
        let v: Vec<f64> = row.iter().map(|c| c.parse().unwrap()).collect();
        let question = Question::new(v[0], v[1], v[2]).unwrap();
        let direct = criterion_value(&setup, Criterion::InvestigatorPublic, &question, v[3]).unwrap();
        assert!((direct - v[7]).abs() <= 1e-12 * direct.abs().max(1.0), "{direct} vs {}", v[7]);
    }
}

#[test]
fn optimal_reviewer_private_is_a_consensus_toss_up() {
    let json: serde_json::Value =
        serde_json::from_str(&stdout_of(&["optimal", "--criterion", "reviewer-private", "--grid", "11", "--json"]))
            .unwrap();
    assert!((json["community_mean"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(json["community_sd"].as_f64().unwrap() < 1e-12);
    assert!(json["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn propcheck_reports_and_exits_cleanly() {
    let out = stdout_of(&["propcheck", "--trials", "0"]);
    assert!(out.contains("checks passed"));
    let out = stdout_of(&["propcheck", "--trials", "20", "--seed", "3"]);
    assert!(!out.contains("FAIL"), "{out}");
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"landscape_grid": 5, "experiment": {"mu0": 0.0, "mu1": 1.0, "sigma_y": 1.0}}"#).unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = rows(&stdout_of(&["--config", cfg, "landscape", "--mode", "private"]));
    assert_eq!(from_file.len(), 5);
    let flag_wins = rows(&stdout_of(&["--config", cfg, "landscape", "--mode", "private", "--grid", "3"]));
    assert_eq!(flag_wins.len(), 3);

    let defaults = rows(&stdout_of(&["landscape", "--mode", "private", "--grid", "5"]));
    assert_ne!(from_file[2][1], defaults[2][1]);
}

#[test]
fn bad_input_is_rejected() {
    assert_eq!(peerlens(&["simulate", "--criterion", "bogus"]).status.code(), Some(2));
    assert_eq!(peerlens(&["landscape", "--mode", "private", "--grid", "1"]).status.code(), Some(2));
    assert_eq!(peerlens(&["mars", "--sigma-y", "-1"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"grid": 5}"#).unwrap();
    assert_eq!(peerlens(&["--config", cfg.to_str().unwrap(), "mars"]).status.code(), Some(2));
    assert_eq!(peerlens(&["--config", dir.path().join("missing.json").to_str().unwrap(), "mars"]).status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_results() {
    let args = ["landscape", "--mode", "public", "--grid", "7"];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_peerlens"))
            .args(args)
            .env("PEERLENS_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run("0").status.code(), Some(2));
}
