use std::process::{Command, Output};

use serde_json::Value;

fn symdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symdyn")).args(args).output().expect("binary runs")
}

fn records(args: &[&str]) -> Vec<Value> {
    let out = symdyn(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn value(r: &Value, key: &str) -> f64 {
    r[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {r}"))
}

#[test]
fn full_shift_growth_entropy() {
    let r = &records(&["entropy", "--shift", "full:2", "--method", "growth", "--n", "10"])[0];
    assert!((value(r, "value") - 2f64.ln()).abs() < 1e-12);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "entropy");
    assert_eq!(r["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn fat_gap_root_lies_between_full_shifts() {
    let r = &records(&["entropy", "--shift", "fatsgap:N=3:powers:2", "--method", "root", "--tol", "1e-12"])[0];
    let h = value(r, "value");
    assert!(h > 2f64.ln() && h < 3f64.ln(), "{h}");
    assert!(value(r, "x_lo") <= value(r, "x_hi"));
}

#[test]
fn perron_and_growth_agree_on_golden_mean() {
    let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let p = &records(&["entropy", "--shift", "sft:2:forbid=11", "--method", "perron"])[0];
    assert!((value(p, "value") - golden).abs() < 1e-10);
}

#[test]
fn counting_map_respects_its_bound() {
    let r = &records(&["theoremc", "--N", "3", "--ell", "2"])[0];
    assert_eq!(r["passed"], true);
    assert_eq!(r["report"]["bound"], "4");
    assert!(r["report"]["max_multiplicity"].as_u64().unwrap() <= 4);
}

#[test]
fn output_is_deterministic() {
    let args = ["spec-check", "--shift", "sgap:all", "--M", "1", "--seed", "5"];
    let a = symdyn(&args);
    let b = symdyn(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(records(&args)[0]["seed"], 5);
}

#[test]
fn configuration_hash_tracks_arguments() {
    let a = &records(&["count", "--shift", "full:2", "--n", "3"])[0];
    let b = &records(&["count", "--shift", "full:2", "--n", "4"])[0];
    assert_ne!(a["config_sha256"], b["config_sha256"]);
}

#[test]
fn exit_codes() {
    assert_eq!(symdyn(&["entropy", "--shift", "nonsense:3"]).status.code(), Some(1));
    assert_eq!(symdyn(&["entropy", "--shift", "full:2", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(symdyn(&["zerotemp", "--shift", "full:2", "--betas", "8:2:1"]).status.code(), Some(1));
    let out = symdyn(&["count", "--shift", "sgap:all", "--horizon", "5", "--n", "9"]);
    assert_eq!(out.status.code(), Some(2));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["record"], "error");
    assert_eq!(symdyn(&["--help"]).status.code(), Some(0));
}

#[test]
fn csv_and_text_formats() {
    let out = symdyn(&["--format", "csv", "count", "--shift", "full:2", "--n", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let cols: Vec<&str> = lines[0].split(',').collect();
    let counts = cols.iter().position(|c| *c == "counts").unwrap();
    assert_eq!(lines[1].split(',').nth(counts), Some("1;2;4;8"));

    let out = symdyn(&["count", "--shift", "full:2", "--n", "2", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("counts: 1;2;4"));
    assert!(text.contains("record: counts"));
}

#[test]
fn hofbauer_export_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("doubling");
    let r = &records(&["hofbauer", "--map", "alphabeta:alpha=0:beta=2", "--export", path.to_str().unwrap()])[0];
    assert_eq!(r["complete"], true);
    assert!((value(r, "perron_entropy") - 2f64.ln()).abs() < 1e-10);
    assert!(!std::fs::read_to_string(path.join("edges.txt")).unwrap().is_empty());
    assert!(!std::fs::read_to_string(path.join("vertices.txt")).unwrap().is_empty());
}

#[test]
fn exact_maximum_on_a_two_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let pot = dir.path().join("pot.txt");
    std::fs::write(&pot, "1 2 1\n2 1 1\n1 1 0\n2 2 1/3\n").unwrap();
    let r = &records(&["maximize", "--shift", "full:2", "--pot", pot.to_str().unwrap()])[0];
    assert_eq!(r["arithmetic"], "exact");
    assert_eq!(r["value_exact"], "1");
    assert_eq!(r["cycle_words"].as_array().unwrap().len(), 2);
}

#[test]
fn zero_temperature_integrals_increase() {
    let dir = tempfile::tempdir().unwrap();
    let pot = dir.path().join("pot.txt");
    std::fs::write(&pot, "1 1\n2 0\n").unwrap();
    let rs = records(&["zerotemp", "--shift", "sft:2:forbid=11", "--pot", pot.to_str().unwrap(), "--betas", "1:2:64"]);
    assert_eq!(rs.len(), 7);
    let integrals: Vec<f64> = rs.iter().map(|r| value(r, "integral")).collect();
    assert!(integrals.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    assert!((integrals[6] - 0.5).abs() < 1e-6);
}

#[test]
fn glued_shift_of_one_word_with_free_connectors() {
    let dir = tempfile::tempdir().unwrap();
    let words = dir.path().join("words.txt");
    std::fs::write(&words, "1 2\n").unwrap();
    let r = &records(&["glue", "--shift", "full:2", "--words", words.to_str().unwrap(), "--t", "0"])[0];
    assert!(value(&r["entropy"], "value").abs() < 1e-9);
}
