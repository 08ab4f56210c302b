use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nearlab::catalog::{write_catalog, write_structure};
use nearlab::enumerate::catalog;
use nearlab::fixtures;

fn nearlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nearlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn small_catalog(dir: &Path) {
    write_catalog(&catalog(1..=4).unwrap(), dir).unwrap();
}

#[test]
fn derivation_count_for_z2_zero() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("z2_zero.json");
    write_structure(&fixtures::z2_zero(), &file).unwrap();
    let o = nearlab(&["derivations", arg(&file), "--count-only"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn derivations_listing_and_non_additive_filter() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("z4_zero.json");
    write_structure(&fixtures::z4_zero(), &file).unwrap();
    let all = stdout(&nearlab(&["derivations", arg(&file)]));
    assert_eq!(all.lines().count(), 64);
    let non_additive = stdout(&nearlab(&["derivations", arg(&file), "--non-additive-only"]));
    assert!(non_additive.lines().any(|l| l == "[0, 1, 1, 0]"));
    assert!(non_additive.lines().count() < 64);
}

#[test]
fn check_reports_predicates() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("z3.json");
    write_structure(&fixtures::z3_ring(), &file).unwrap();
    let o = nearlab(&["check", arg(&file)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("name: Z3_RING"));
    assert!(text.contains("three_prime: true"));
    assert!(text.contains("commutative_ring: true"));
}

#[test]
fn check_lists_axiom_violations() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    fs::write(&file, r#"{"order": 2, "add": [[0,1],[1,0]], "mul": [[0,1],[0,0]]}"#).unwrap();
    let o = nearlab(&["check", arg(&file)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("mul not associative at [1, 1, 1]"), "{}", stdout(&o));
}

#[test]
fn theorems_on_small_catalog_exit_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    small_catalog(dir.path());
    let o = nearlab(&["theorems", arg(dir.path()), "--spec", "T2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("0 refuted"));
}

#[test]
fn ad_hoc_identity_is_evaluated() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("z2_zero.json");
    write_structure(&fixtures::z2_zero(), &file).unwrap();
    let o = nearlab(&["theorems", arg(&file), "--identity", "d(x*y) = d(x)*d(y)"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("holds for 2, fails for 0"), "{}", stdout(&o));
}

#[test]
fn malformed_identity_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("z2.json");
    write_structure(&fixtures::z2_field(), &file).unwrap();
    let o = nearlab(&["theorems", arg(&file), "--identity", "d(x**y) = 0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("position 4"), "{}", stderr(&o));
}

#[test]
fn unknown_spec_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("z2.json");
    write_structure(&fixtures::z2_field(), &file).unwrap();
    let o = nearlab(&["theorems", arg(&file), "--spec", "T9"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_flags_exit_with_one() {
    assert_eq!(nearlab(&["enumerate"]).status.code(), Some(1));
    assert_eq!(nearlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn hunt_finds_a_small_witness() {
    let o = nearlab(&["hunt", "--spec", "T2", "--drop", "three_prime", "--max", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("Z2_ZERO"), "{}", stdout(&o));
}

#[test]
fn enumerate_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = nearlab(&["enumerate", "--order", "4", "--group", "K4", "--up-to-iso", "--out", arg(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 23);
}

#[test]
fn csv_report_has_one_row_per_verdict() {
    let dir = tempfile::tempdir().unwrap();
    small_catalog(dir.path());
    let json = stdout(&nearlab(&["report", "--in", arg(dir.path()), "--format", "json", "--canonical"]));
    let csv = stdout(&nearlab(&["report", "--in", arg(dir.path()), "--format", "csv", "--canonical"]));
    let verdicts = json.lines().count();
    assert!(verdicts > 0);
    assert_eq!(csv.lines().count(), verdicts + 1);
    assert!(csv.starts_with("structure,spec,derivation,status,witness,timing_us"));
    for line in json.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["status"] != "Refuted", "{line}");
    }
}

#[test]
fn canonical_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    small_catalog(dir.path());
    let out = tempfile::tempdir().unwrap();
    let (a, b) = (out.path().join("a.jsonl"), out.path().join("b.jsonl"));
    for target in [&a, &b] {
        let o = nearlab(&["report", "--in", arg(dir.path()), "--canonical", "--out", arg(target)]);
        assert!(o.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}
