//! Drives the `roumieu` binary and checks exit codes and report files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn roumieu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roumieu"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn shipped(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = shipped("constant_one.cfg");
    let o = roumieu(&["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = String::from_utf8(o.stdout).unwrap();
    assert!(summary.contains("(a)=fail"), "{summary}");

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("constant_one.json")).unwrap()).unwrap();
    assert_eq!(json["consistency"], true);
    for c in ["a", "b", "c", "d", "e"] {
        assert_eq!(json[c]["verdict"], "fail", "condition {c}");
    }
    let csv = fs::read_to_string(dir.path().join("constant_one.csv")).unwrap();
    assert!(csv.starts_with("family,n,value_re,value_im\n"));
    assert!(csv.lines().count() > 30);
}

#[test]
fn sequence_report_flags_m3_for_factorials() {
    let dir = tempfile::tempdir().unwrap();
    let o = roumieu(&["seq", "--weights", "gevrey:1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("seq.json")).unwrap()).unwrap();
    let text = json.to_string();
    assert!(text.contains("m3"), "{text}");
}

#[test]
fn stdout_report_without_out_directory() {
    let o = roumieu(&["rseq", "--spec", "linear:3", "--horizon", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(json.is_object());
}

#[test]
fn malformed_inputs_exit_with_two() {
    let bad_dist = roumieu(&["integrability", "run", "--dist", "gaussian +"]);
    assert_eq!(bad_dist.status.code(), Some(2));
    assert!(stderr(&bad_dist).contains("parse error"));

    assert_eq!(roumieu(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(roumieu(&["seq", "--weights", "gevrey:abc"]).status.code(), Some(2));

    let missing = roumieu(&["run", "--config", "/nonexistent/experiment.cfg"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("cannot read config"));
}

#[test]
fn config_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("broken.cfg");
    fs::write(&cfg, "[experiment]\nname = broken\ndistribution = gaussian\n\n[weights]\ncolour = blue\n").unwrap();
    let o = roumieu(&["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("broken.cfg:6:"), "{}", stderr(&o));
}

#[test]
fn unwritable_output_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("not-a-directory");
    fs::write(&blocker, "").unwrap();
    let o = roumieu(&["seq", "--weights", "gevrey:2", "--out", blocker.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}
