//! Drive the checks from a session file, as the CLI does.
//!
//! cargo run --example session -- configs/b2-custom-algebra.toml

use std::path::PathBuf;

use twistdual::commands::{cmd_check_cybe, cmd_twist};
use twistdual::config::SessionConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/sl3-gamma-third.toml")
    });
    let cfg = SessionConfig::load(&path)?;
    for report in [cmd_check_cybe(&cfg)?, cmd_twist(&cfg)?] {
        print!("{}", report.to_text(false));
    }
    Ok(())
}
