//! Session configuration: a TOML file with one section per concern. Unknown
//! keys are rejected; parse errors carry line and column.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use crate::presets::{AlgebraChoice, AlgebraDefinition, Setup, SetupError};
use crate::scalar::{Param, Rational};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid value for {field}: {message}")]
    Value { field: &'static str, message: String },
    #[error(transparent)]
    Setup(#[from] SetupError),
}

/// How `gamma` is bound for a session.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum GammaBinding {
    /// Use whatever the setup says.
    #[default]
    Inherit,
    Symbolic,
    Value(Rational),
}

impl FromStr for GammaBinding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "symbolic" => Ok(GammaBinding::Symbolic),
            "inherit" => Ok(GammaBinding::Inherit),
            t => t.parse::<Rational>().map(GammaBinding::Value).map_err(|e| format!("`{t}`: {e}")),
        }
    }
}

impl fmt::Display for GammaBinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaBinding::Inherit => f.write_str("inherit"),
            GammaBinding::Symbolic => f.write_str("symbolic"),
            GammaBinding::Value(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for GammaBinding {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GammaBinding {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(GammaBinding::Value(Rational::from_int(n))),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum RepChoice {
    Fundamental,
    Adjoint,
    #[default]
    Both,
    None,
}

impl RepChoice {
    pub fn fundamental(self) -> bool {
        matches!(self, RepChoice::Fundamental | RepChoice::Both)
    }

    pub fn adjoint(self) -> bool {
        matches!(self, RepChoice::Adjoint | RepChoice::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SignChoice {
    Plus,
    Minus,
    #[default]
    Both,
}

impl SignChoice {
    pub fn signs(self) -> Vec<i8> {
        match self {
            SignChoice::Plus => vec![1],
            SignChoice::Minus => vec![-1],
            SignChoice::Both => vec![1, -1],
        }
    }
}

fn default_preset() -> String {
    "sl3-extended-jordanian".into()
}

fn default_order() -> u32 {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SessionSection {
    #[serde(default = "default_preset")]
    pub preset: String,
    #[serde(default = "default_order")]
    pub order: u32,
    #[serde(default)]
    pub gamma: GammaBinding,
    #[serde(default)]
    pub rep: RepChoice,
    #[serde(default)]
    pub format: OutputFormat,
    /// A TOML file holding an algebra definition that replaces the setup's.
    #[serde(default)]
    pub algebra_file: Option<PathBuf>,
}

impl Default for SessionSection {
    fn default() -> Self {
        Self {
            preset: default_preset(),
            order: default_order(),
            gamma: GammaBinding::default(),
            rep: RepChoice::default(),
            format: OutputFormat::default(),
            algebra_file: None,
        }
    }
}

fn default_from() -> String {
    "xi".into()
}

fn default_to() -> String {
    "zeta".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitSection {
    /// The parameter replaced by `eps * to`.
    #[serde(default = "default_from")]
    pub from: String,
    #[serde(default = "default_to")]
    pub to: String,
}

impl Default for LimitSection {
    fn default() -> Self {
        Self { from: default_from(), to: default_to() }
    }
}

fn default_bound() -> u32 {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualCoordsSection {
    /// Largest monomial degree tried for coordinate corrections.
    #[serde(default = "default_bound")]
    pub bound: u32,
    /// A supplied map `label# = expression`; verified instead of derived.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub map: BTreeMap<String, String>,
}

impl Default for DualCoordsSection {
    fn default() -> Self {
        Self { bound: default_bound(), map: BTreeMap::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParabolicSection {
    #[serde(default)]
    pub sign: SignChoice,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SessionConfig {
    #[serde(default)]
    pub session: SessionSection,
    /// A full setup; replaces the preset when present.
    #[serde(default)]
    pub setup: Option<Setup>,
    #[serde(default)]
    pub limit: LimitSection,
    #[serde(default)]
    pub dual_coords: DualCoordsSection,
    #[serde(default)]
    pub parabolic: ParabolicSection,
}

impl SessionConfig {
    pub fn parse(src: &str, path: &str) -> Result<Self, ConfigError> {
        let cfg: SessionConfig = toml::from_str(src).map_err(|e| ConfigError::Parse {
            path: path.into(),
            message: locate(src, &e),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Read a session file; a relative `algebra-file` is taken relative to it.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let src = read(path)?;
        let mut cfg = Self::parse(&src, &path.display().to_string())?;
        if let (Some(f), Some(dir)) = (&cfg.session.algebra_file, path.parent()) {
            if f.is_relative() {
                cfg.session.algebra_file = Some(dir.join(f));
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.session.order == 0 {
            return Err(ConfigError::Value { field: "session.order", message: "must be at least 1".into() });
        }
        for (field, v) in [("limit.from", &self.limit.from), ("limit.to", &self.limit.to)] {
            if Param::from_name(v).is_none() {
                return Err(ConfigError::Value { field, message: format!("`{v}` is not a parameter") });
            }
        }
        Ok(())
    }

    /// The setup for this session: inline or preset, with the algebra file
    /// and the `gamma` binding applied.
    pub fn resolve_setup(&self) -> Result<Setup, ConfigError> {
        let mut setup = match &self.setup {
            Some(s) => s.clone(),
            None => Setup::preset(&self.session.preset)?,
        };
        if let Some(path) = &self.session.algebra_file {
            let src = read(path)?;
            let def: AlgebraDefinition = toml::from_str(&src).map_err(|e| ConfigError::Parse {
                path: path.display().to_string(),
                message: locate(&src, &e),
            })?;
            def.build()?;
            setup.algebra = AlgebraChoice::Custom(Box::new(def));
        }
        Ok(apply_gamma(setup, &self.session.gamma))
    }

    pub fn limit_params(&self) -> (Param, Param) {
        let p = |s: &str| Param::from_name(s).expect("validated");
        (p(&self.limit.from), p(&self.limit.to))
    }
}

pub fn apply_gamma(setup: Setup, gamma: &GammaBinding) -> Setup {
    match gamma {
        GammaBinding::Inherit => setup,
        GammaBinding::Symbolic => setup.with_gamma(None),
        GammaBinding::Value(r) => setup.with_gamma(Some(r.clone())),
    }
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })
}

/// `line L, column C: message` from a TOML error.
fn locate(src: &str, e: &toml::de::Error) -> String {
    let msg = e.message().to_string();
    match e.span() {
        Some(span) => {
            let before = &src[..span.start.min(src.len())];
            let line = before.matches('\n').count() + 1;
            let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            format!("line {line}, column {col}: {msg}")
        }
        None => msg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_uses_defaults() {
        let c = SessionConfig::parse("", "x").unwrap();
        assert_eq!(c.session.order, 4);
        assert_eq!(c.session.preset, "sl3-extended-jordanian");
        assert_eq!(c.dual_coords.bound, 2);
    }

    #[test]
    fn unknown_keys_are_rejected_with_a_location() {
        let err = SessionConfig::parse("[session]\norder = 4\nordre = 3\n", "cfg.toml").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("line 3, column 1"), "{text}");
        assert!(text.contains("ordre"), "{text}");
    }

    #[test]
    fn gamma_accepts_rationals_and_symbolic() {
        let c = SessionConfig::parse("[session]\ngamma = \"-1/3\"\n", "x").unwrap();
        assert_eq!(c.session.gamma, GammaBinding::Value(Rational::new(-1, 3)));
        let c = SessionConfig::parse("[session]\ngamma = 1\n", "x").unwrap();
        assert_eq!(c.session.gamma, GammaBinding::Value(Rational::one()));
        let c = SessionConfig::parse("[session]\ngamma = \"symbolic\"\n", "x").unwrap();
        assert_eq!(c.session.gamma, GammaBinding::Symbolic);
        let text = toml::to_string(&c).unwrap();
        assert_eq!(SessionConfig::parse(&text, "x").unwrap(), c);
        assert!(SessionConfig::parse("[session]\ngamma = \"abc\"\n", "x").is_err());
    }

    #[test]
    fn inline_setup_round_trips() {
        let setup = Setup::b2_jordanian();
        let text = toml::to_string(&SessionConfig { setup: Some(setup.clone()), ..Default::default() }).unwrap();
        let back = SessionConfig::parse(&text, "x").unwrap();
        assert_eq!(back.resolve_setup().unwrap(), setup);
    }
}
