use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twistdual::commands;
use twistdual::config::{ConfigError, DualCoordsSection, GammaBinding, OutputFormat, RepChoice, SessionConfig, SignChoice};
use twistdual::report::Report;

#[derive(Parser)]
#[command(name = "twistdual", version, about = "Twist deformations of U(g) in dual group coordinates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Session file (TOML); flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Built-in setup.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Truncation order in total grade.
    #[arg(long, global = true)]
    order: Option<u32>,
    /// `symbolic` or an exact rational such as `-1/3`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma: Option<GammaBinding>,
    #[arg(long, global = true, value_enum)]
    rep: Option<RepChoice>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Leave per-check timings out of the output.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Worker threads for concurrent checks.
    #[arg(long, global = true, env = "TWISTDUAL_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Classical Yang-Baxter equation for the setup's r-matrix.
    CheckCybe,
    /// Dual Lie algebra, its relations and carrier structure.
    DualAlgebra,
    /// Twisted coproducts, cocycle and Hopf axioms, representation checks.
    Twist,
    /// Second classical limit of the twisted coproduct.
    ClassicalLimit {
        /// Parameter replaced by `eps * to`.
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
    },
    /// Dual-group coordinates and the coproducts in them.
    DualCoords {
        /// Largest monomial degree for coordinate corrections.
        #[arg(long)]
        bound: Option<u32>,
        /// Write the coordinate map as a `[dual-coords.map]` session section.
        #[arg(long)]
        map_out: Option<PathBuf>,
    },
    /// Irregular values of gamma.
    ScanGamma,
    /// Parabolic extensions of the zeta chain.
    Parabolic {
        #[arg(long, value_enum)]
        sign: Option<SignChoice>,
    },
    /// Always-on engine properties.
    Properties,
    /// Every reference check.
    Suite,
}

fn session(cli: &Cli) -> Result<SessionConfig, ConfigError> {
    let c = &cli.common;
    let mut cfg = match &c.config {
        Some(p) => SessionConfig::load(p)?,
        None => SessionConfig::default(),
    };
    if let Some(p) = &c.preset {
        cfg.session.preset = p.clone();
        cfg.setup = None;
    }
    if let Some(n) = c.order {
        if n == 0 {
            return Err(ConfigError::Value { field: "--order", message: "must be at least 1".into() });
        }
        cfg.session.order = n;
    }
    if let Some(g) = &c.gamma {
        cfg.session.gamma = g.clone();
    }
    if let Some(r) = c.rep {
        cfg.session.rep = r;
    }
    if let Some(f) = c.format {
        cfg.session.format = f;
    }
    match &cli.command {
        Command::ClassicalLimit { from, to } => {
            if let Some(f) = from {
                cfg.limit.from = f.clone();
            }
            if let Some(t) = to {
                cfg.limit.to = t.clone();
            }
            cfg.validate()?;
        }
        Command::DualCoords { bound: Some(b), .. } => cfg.dual_coords.bound = *b,
        Command::Parabolic { sign: Some(s) } => cfg.parabolic.sign = *s,
        _ => {}
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli, cfg: &SessionConfig) -> Result<Report, ConfigError> {
    match cli.command {
        Command::CheckCybe => commands::cmd_check_cybe(cfg),
        Command::DualAlgebra => commands::cmd_dual_algebra(cfg),
        Command::Twist => commands::cmd_twist(cfg),
        Command::ClassicalLimit { .. } => commands::cmd_limit(cfg),
        Command::DualCoords { .. } => commands::cmd_dual_coords(cfg),
        Command::ScanGamma => commands::cmd_scan_gamma(cfg),
        Command::Parabolic { .. } => commands::cmd_parabolic(cfg, cfg.parabolic.sign),
        Command::Properties => commands::cmd_properties(cfg),
        Command::Suite => commands::cmd_suite(cfg),
    }
}

fn write_map(report: &Report, path: &PathBuf) -> Result<(), String> {
    let table = report.tables.iter().find(|t| t.name == "coordinate map").ok_or("no coordinate map was produced")?;
    let section = DualCoordsSection { map: table.rows.iter().cloned().collect(), ..Default::default() };
    let mut doc = toml::Table::new();
    doc.insert("dual-coords".into(), toml::Value::try_from(section).map_err(|e| e.to_string())?);
    std::fs::write(path, toml::to_string(&doc).map_err(|e| e.to_string())?).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = session(&cli).and_then(|cfg| dispatch(&cli, &cfg).map(|r| (cfg, r)));
    match result {
        Ok((cfg, report)) => {
            let timing = !cli.common.no_timing;
            let out = match cfg.session.format {
                OutputFormat::Json => report.to_json(timing),
                OutputFormat::Text => report.to_text(timing),
            };
            print!("{out}");
            if let Command::DualCoords { map_out: Some(path), .. } = &cli.command {
                if let Err(e) = write_map(&report, path) {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
