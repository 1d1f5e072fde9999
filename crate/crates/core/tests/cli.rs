use std::fs;
use std::process::{Command, Output};

fn tribloch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tribloch")).args(args).output().expect("binary runs")
}

#[test]
fn list_presets_names_every_preset() {
    let out = tribloch(&["list-presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["figure1", "figure2", "figure3", "rabi-check", "fixed-point"] {
        assert!(text.contains(name), "{name} missing from {text}");
    }
}

#[test]
fn validate_reports_parse_errors_with_exit_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.cfg");
    fs::write(&good, "initial = W\nfield_kind = NR\n").unwrap();
    assert!(tribloch(&["validate", "--config", good.to_str().unwrap()]).status.success());

    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "initial = Mix\nx = 0.1\n").unwrap();
    let out = tribloch(&["validate", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn missing_file_exits_with_io_code() {
    let out = tribloch(&["validate", "--config", "/nonexistent/scenario.cfg"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn unknown_preset_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = tribloch(&["run", "--preset", "figure7", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_config_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ghz.cfg");
    fs::write(&cfg, "name = ghz_nr\ninitial = GHZ\nfield_kind = NR\nmeasures = [m_sm, m_k]\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = tribloch(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--tau-max",
        "1",
        "--oracle",
        "on",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(out_dir.join("ghz_nr.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("tau,b,m_sm,m_k"));
    assert_eq!(lines.next(), Some("0,2.64575131106,4,1"));
    assert_eq!(csv.lines().count(), 102);
    let manifest = fs::read_to_string(out_dir.join("ghz_nr.manifest")).unwrap();
    assert!(manifest.contains("oracle_max_deviation = "));
    assert!(!manifest.contains("oracle_max_deviation = off"));
    assert!(manifest.contains("tau_max = 1.0"));
}

#[test]
fn preset_override_rejects_bad_dt() {
    let dir = tempfile::tempdir().unwrap();
    let out = tribloch(&["run", "--preset", "rabi-check", "--dt", "0.003", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn preset_and_config_are_exclusive() {
    let out = tribloch(&["run", "--preset", "figure1", "--config", "x.cfg"]);
    assert!(!out.status.success());
    let out = tribloch(&["run"]);
    assert!(!out.status.success());
}
