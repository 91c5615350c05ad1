use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twistdual"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn check_cybe_passes_with_exit_zero() {
    let o = run(&["check-cybe"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("check-cybe [sl3-extended-jordanian] order 4 gamma symbolic: pass"));
}

#[test]
fn json_output_has_a_schema_version() {
    let o = run(&["--format", "json", "--no-timing", "scan-gamma"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["status"], "pass");
    assert!(!stdout(&o).contains("timing_ms"));
}

#[test]
fn cli_json_equals_the_golden_file() {
    let o = run(&["--format", "json", "--no-timing", "--rep", "both", "twist"]);
    let want = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/twist.json")).unwrap();
    assert_eq!(stdout(&o), want);
}

#[test]
fn failing_checks_exit_one() {
    let o = run(&["--gamma", "0", "parabolic"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not quasiprimitive"), "{}", stdout(&o));
}

#[test]
fn config_errors_exit_two_with_a_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "[session]\norder = 4\n\n[limit]\nfrom = \"xi\"\nscale = 2\n").unwrap();
    let o = run(&["--config", path.to_str().unwrap(), "classical-limit"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 6, column 1"), "{err}");
    assert!(err.contains("scale"), "{err}");
}

#[test]
fn bad_values_exit_two() {
    assert_eq!(run(&["--preset", "sl4", "twist"]).status.code(), Some(2));
    assert_eq!(run(&["--order", "0", "twist"]).status.code(), Some(2));
    assert_eq!(run(&["classical-limit", "--from", "omega"]).status.code(), Some(2));
    let o = run(&["--config", "/nonexistent/session.toml", "twist"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot read"));
}

#[test]
fn shipped_configs_run() {
    for name in ["sl3-extended-jordanian.toml", "sl3-gamma-third.toml", "b2-custom-algebra.toml"] {
        let path = configs().join(name);
        let o = run(&["--config", path.to_str().unwrap(), "twist"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn algebra_file_with_broken_jacobi_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("alg.toml"),
        "name = \"broken\"\nlabels = [\"a\", \"b\", \"c\"]\nbrackets = [[\"a\", \"b\", \"1\", \"c\"], [\"b\", \"c\", \"1\", \"a\"], [\"c\", \"a\", \"1\", \"c\"]]\n",
    )
    .unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "[session]\nalgebra-file = \"alg.toml\"\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "check-cybe"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Jacobi"), "{}", stderr(&o));
}

#[test]
fn extension_wedge_alone_fails_cybe() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(
        &cfg,
        "[setup]\nname = \"extension-only\"\nalgebra = \"sl3\"\nr_matrix = [[\"e12\", \"e23\", \"1\"]]\ndeformation = \"xi\"\nfactors = []\n",
    )
    .unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "check-cybe"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("fail            cybe"));
}

#[test]
fn map_out_round_trips_through_a_session() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("map.toml");
    let o = run(&["--rep", "none", "dual-coords", "--map-out", map.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&map).unwrap();
    assert!(text.contains("[dual-coords.map]"), "{text}");
    let o = run(&["--config", map.to_str().unwrap(), "--rep", "none", "dual-coords"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("supplied-map"));
}

#[test]
fn thread_count_does_not_change_the_suite() {
    let one = bin().args(["--format", "json", "--no-timing", "suite"]).env("TWISTDUAL_THREADS", "1").output().unwrap();
    let four = bin().args(["--format", "json", "--no-timing", "suite"]).env("TWISTDUAL_THREADS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let want = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/suite.json")).unwrap();
    assert_eq!(stdout(&one), want);
}

#[test]
fn gamma_flag_accepts_negative_rationals() {
    let o = run(&["--gamma", "-1/3", "--rep", "fundamental", "--order", "3", "twist"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("gamma -1/3"));
}
