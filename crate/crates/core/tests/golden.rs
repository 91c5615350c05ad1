//! Reports without timings are compared byte for byte with checked-in JSON.
//! Set `TWISTDUAL_BLESS=1` to rewrite the files after an intended change.

use std::path::PathBuf;

use twistdual::commands::*;
use twistdual::config::{SessionConfig, SignChoice};
use twistdual::report::Report;

fn golden(name: &str, report: Report) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    let json = report.to_json(false);
    if std::env::var_os("TWISTDUAL_BLESS").is_some() {
        std::fs::write(&path, &json).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(json == want, "{name}: report differs from {}", path.display());
}

fn sl3() -> SessionConfig {
    SessionConfig::default()
}

fn b2() -> SessionConfig {
    SessionConfig::parse("[session]\npreset = \"b2-jordanian\"\n", "b2").unwrap()
}

#[test]
fn check_cybe() {
    golden("check-cybe", cmd_check_cybe(&sl3()).unwrap());
}

#[test]
fn dual_algebra() {
    golden("dual-algebra", cmd_dual_algebra(&sl3()).unwrap());
}

#[test]
fn twist() {
    golden("twist", cmd_twist(&sl3()).unwrap());
}

#[test]
fn twist_b2() {
    golden("twist-b2", cmd_twist(&b2()).unwrap());
}

#[test]
fn classical_limit() {
    golden("classical-limit", cmd_limit(&sl3()).unwrap());
}

#[test]
fn dual_coords() {
    golden("dual-coords", cmd_dual_coords(&sl3()).unwrap());
}

#[test]
fn scan_gamma() {
    golden("scan-gamma", cmd_scan_gamma(&sl3()).unwrap());
}

#[test]
fn parabolic() {
    golden("parabolic", cmd_parabolic(&sl3(), SignChoice::Both).unwrap());
}

#[test]
fn suite_is_reproducible() {
    let a = cmd_suite(&sl3()).unwrap();
    let b = cmd_suite(&sl3()).unwrap();
    assert_eq!(a.to_json(false), b.to_json(false));
    assert!(a.passed());
    golden("suite", a);
}
