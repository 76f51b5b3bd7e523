//! The binary's exit codes and output formats.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_adapted-kernels"))
}

#[test]
fn roots_succeeds_for_valid_pairs() {
    let out = bin().args(["roots", "-m", "2", "-n", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(s + 1)^2"), "{text}");
    assert!(text.contains("gamma shifts: 7/12, 1/6"), "{text}");
}

#[test]
fn invalid_parameters_exit_with_two() {
    for args in [&["roots", "-m", "3", "-n", "3"][..], &["verify", "partition", "-m", "0", "-n", "2"], &["verify", "nonsense"], &[]] {
        let out = bin().args(args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = bin().args(["verify", "pair", "--z", "abc"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_writes_jsonl_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("moments.jsonl");
    let out = bin().args(["verify", "moments", "--out", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|v| v["pass"] == true));
}

#[test]
fn failing_checks_exit_with_one() {
    // z = -0.9 lies outside the strip where the pairing is defined
    let out = bin().args(["verify", "pair", "--z", "-0.9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let run = || bin().args(["verify", "partition", "--samples", "300", "--seed", "11"]).output().unwrap().stdout;
    assert_eq!(run(), run());
}
