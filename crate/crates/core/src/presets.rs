//! Built-in twist setups and the machinery to turn a setup into a twisted
//! Hopf algebra.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::expr::{Definitions, Expr, ExprError, SymbolicEvaluator};
use crate::lie::{CartanElement, LieAlgebraSpec, LieError, Weight};
use crate::scalar::{Param, Rational};
use crate::twist::{TwistChain, TwistError, TwistFactor, TwistedHopf};
use crate::uea::{GradingContext, Uea};

pub const PRESET_NAMES: &[&str] =
    &["sl3-extended-jordanian", "b2-jordanian", "sl3-parabolic-plus", "sl3-parabolic-minus"];

#[derive(Debug, thiserror::Error)]
pub enum SetupError {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraChoice {
    /// sl(3) with Cartan basis `h = h13 + γ h_perp`, `h_perp`.
    Sl3,
    /// sl(3) with Cartan basis `h13`, `h_perp`.
    Sl3Standard,
    Borel2,
    Custom(Box<AlgebraDefinition>),
}

impl AlgebraChoice {
    pub fn spec(&self) -> Result<LieAlgebraSpec, SetupError> {
        Ok(match self {
            AlgebraChoice::Sl3 => LieAlgebraSpec::sl3_adapted(),
            AlgebraChoice::Sl3Standard => LieAlgebraSpec::build_sl(3)?,
            AlgebraChoice::Borel2 => LieAlgebraSpec::borel2(),
            AlgebraChoice::Custom(def) => def.build()?,
        })
    }
}

/// A Lie algebra given by labels and brackets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDefinition {
    pub name: String,
    pub labels: Vec<String>,
    #[serde(default)]
    pub cartan: Vec<String>,
    /// `(x, y, c, z)`: the bracket `[x, y]` contains `c·z`; `[y, x]` follows
    /// by antisymmetry.
    pub brackets: Vec<(String, String, String, String)>,
    /// Weights of basis vectors; unlisted ones get weight zero.
    #[serde(default)]
    pub weights: BTreeMap<String, Vec<Rational>>,
}

impl AlgebraDefinition {
    pub fn build(&self) -> Result<LieAlgebraSpec, SetupError> {
        let n = self.labels.len();
        let index = |l: &str| {
            self.labels.iter().position(|x| x == l).ok_or_else(|| SetupError::Invalid(format!("unknown label `{l}`")))
        };
        let mut constants = vec![vec![Vec::new(); n]; n];
        for (x, y, c, z) in &self.brackets {
            let (i, j, k) = (index(x)?, index(y)?, index(z)?);
            let c = crate::tables::coefficient(c)?;
            constants[j][i].push((k, -&c));
            constants[i][j].push((k, c));
        }
        let cartan = self.cartan.iter().map(|l| index(l)).collect::<Result<Vec<_>, _>>()?;
        let width = self.weights.values().map(Vec::len).max().unwrap_or(1);
        let mut weights = vec![Weight::zero(width); n];
        for (l, w) in &self.weights {
            if w.len() != width {
                return Err(SetupError::Invalid(format!("weight of `{l}` has {} entries, expected {width}", w.len())));
            }
            weights[index(l)?] = Weight(w.clone());
        }
        let spec = LieAlgebraSpec::from_parts(self.name.clone(), self.labels.clone(), constants, cartan, weights)?;
        let jacobi = spec.jacobi_check();
        if !jacobi.is_zero() {
            return Err(SetupError::Invalid(format!("`{}` violates the Jacobi identity", self.name)));
        }
        Ok(spec)
    }
}

/// A twist factor described by expression strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FactorSpec {
    /// `exp(h ⊗ arg)`; `h` must be a Cartan combination.
    Jordanian { name: String, h: String, arg: String },
    /// `exp(p · left ⊗ right)` with `p` the deformation parameter.
    Extension { name: String, left: String, right: String },
    Generic { name: String, exponent: String },
}

impl FactorSpec {
    pub fn name(&self) -> &str {
        match self {
            FactorSpec::Jordanian { name, .. } | FactorSpec::Extension { name, .. } | FactorSpec::Generic { name, .. } => {
                name
            }
        }
    }

    fn map_exprs(&self, f: &dyn Fn(&str) -> Result<String, ExprError>) -> Result<Self, ExprError> {
        Ok(match self {
            FactorSpec::Jordanian { name, h, arg } => {
                FactorSpec::Jordanian { name: name.clone(), h: f(h)?, arg: f(arg)? }
            }
            FactorSpec::Extension { name, left, right } => {
                FactorSpec::Extension { name: name.clone(), left: f(left)?, right: f(right)? }
            }
            FactorSpec::Generic { name, exponent } => FactorSpec::Generic { name: name.clone(), exponent: f(exponent)? },
        })
    }
}

/// Everything needed to build a twisted algebra and its r-matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Setup {
    pub name: String,
    pub algebra: AlgebraChoice,
    /// Named sub-expressions such as `sigma`.
    #[serde(default)]
    pub definitions: BTreeMap<String, String>,
    /// Factors in product order `[F_p, …, F_1]`.
    pub factors: Vec<FactorSpec>,
    /// Wedge terms `(left, right, coefficient)` of the classical r-matrix.
    #[serde(default)]
    pub r_matrix: Vec<(String, String, String)>,
    /// The deformation parameter appearing in the expressions.
    #[serde(with = "param_name")]
    pub deformation: Param,
    /// A fixed rational value for `gamma`; symbolic when absent.
    #[serde(default)]
    pub gamma: Option<Rational>,
}

mod param_name {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::scalar::Param;

    pub fn serialize<S: Serializer>(p: &Param, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(p.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Param, D::Error> {
        let s = String::deserialize(d)?;
        Param::from_name(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown parameter `{s}`")))
    }
}

fn strs(items: &[(&str, &str)]) -> BTreeMap<String, String> {
    items.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

impl Setup {
    /// The extended Jordanian twist `exp(ξ e12 ⊗ e23 e^{½(3γ−1)σ}) exp(h ⊗ σ)`
    /// with `σ = ln(1 + ξ e13)`.
    pub fn sl3_extended_jordanian() -> Self {
        Self {
            name: "sl3-extended-jordanian".into(),
            algebra: AlgebraChoice::Sl3,
            definitions: strs(&[("sigma", "ln(1 + xi*e13)")]),
            factors: vec![
                FactorSpec::Extension {
                    name: "extension".into(),
                    left: "e12".into(),
                    right: "e23*exp(1/2*(3*gamma - 1)*sigma)".into(),
                },
                FactorSpec::Jordanian { name: "jordanian".into(), h: "h".into(), arg: "sigma".into() },
            ],
            r_matrix: vec![("h".into(), "e13".into(), "1".into()), ("e12".into(), "e23".into(), "1".into())],
            deformation: Param::Xi,
            gamma: None,
        }
    }

    /// The Jordanian twist `exp(H ⊗ σ)` of b(2), `σ = ln(1 + ξ E)`.
    pub fn b2_jordanian() -> Self {
        Self {
            name: "b2-jordanian".into(),
            algebra: AlgebraChoice::Borel2,
            definitions: strs(&[("sigma", "ln(1 + xi*E)")]),
            factors: vec![FactorSpec::Jordanian { name: "jordanian".into(), h: "H".into(), arg: "sigma".into() }],
            r_matrix: vec![("H".into(), "E".into(), "1".into())],
            deformation: Param::Xi,
            gamma: None,
        }
    }

    /// The extended Jordanian chain in `zeta`, enlarged by the parabolic
    /// factor; `sign = +1` uses `e21` at `γ = 1`, `sign = −1` uses
    /// `e32 − ζ h e12` at `γ = −1`.
    pub fn sl3_parabolic(sign: i8) -> Self {
        let (name, carrier, coef) = if sign > 0 {
            ("sl3-parabolic-plus", "e21", "-2/3")
        } else {
            ("sl3-parabolic-minus", "e32 - zeta*h*e12", "2/3")
        };
        let mut s = Self::sl3_extended_jordanian().with_deformation(Param::Zeta).expect("preset parses");
        s.name = name.into();
        s.gamma = Some(Rational::from_int(sign as i64));
        s.factors.insert(
            0,
            FactorSpec::Generic {
                name: "parabolic".into(),
                exponent: format!("{coef}*h_perp ⊗ ln((1 + eta*({carrier}))*exp(2*sigma))"),
            },
        );
        s
    }

    pub fn preset(name: &str) -> Result<Self, SetupError> {
        match name {
            "sl3-extended-jordanian" => Ok(Self::sl3_extended_jordanian()),
            "b2-jordanian" => Ok(Self::b2_jordanian()),
            "sl3-parabolic-plus" => Ok(Self::sl3_parabolic(1)),
            "sl3-parabolic-minus" => Ok(Self::sl3_parabolic(-1)),
            _ => Err(SetupError::UnknownPreset(name.into())),
        }
    }

    fn map_exprs(&self, f: &dyn Fn(&Expr) -> Expr) -> Result<Self, ExprError> {
        let g = |s: &str| -> Result<String, ExprError> { Ok(f(&Expr::parse(s)?).to_string()) };
        let mut out = self.clone();
        out.definitions = self.definitions.iter().map(|(k, v)| Ok((k.clone(), g(v)?))).collect::<Result<_, ExprError>>()?;
        out.factors = self.factors.iter().map(|x| x.map_exprs(&g)).collect::<Result<_, _>>()?;
        out.r_matrix =
            self.r_matrix.iter().map(|(a, b, c)| Ok((a.clone(), b.clone(), g(c)?))).collect::<Result<_, ExprError>>()?;
        Ok(out)
    }

    /// Rename the deformation parameter throughout.
    pub fn with_deformation(&self, p: Param) -> Result<Self, ExprError> {
        let from = self.deformation;
        let mut out = self.map_exprs(&|e| e.substitute_param(from, &Expr::Param(p)))?;
        out.deformation = p;
        Ok(out)
    }

    pub fn with_gamma(mut self, gamma: Option<Rational>) -> Self {
        self.gamma = gamma;
        self
    }

    /// Drop every factor except those named.
    pub fn keep_factors(&self, names: &[&str]) -> Self {
        let mut out = self.clone();
        out.factors.retain(|f| names.contains(&f.name()));
        out
    }

    /// The algebra with `gamma` specialized when fixed.
    pub fn spec(&self) -> Result<LieAlgebraSpec, SetupError> {
        let spec = self.algebra.spec()?;
        Ok(match &self.gamma {
            Some(g) => spec.specialize(Param::Gamma, &g.clone().into()),
            None => spec,
        })
    }

    /// Parse an expression of this setup, with `gamma` substituted when fixed.
    pub fn expr(&self, src: &str) -> Result<Expr, ExprError> {
        let e = Expr::parse(src)?;
        Ok(match &self.gamma {
            Some(g) => e.substitute_param(Param::Gamma, &Expr::Num(g.clone())),
            None => e,
        })
    }

    pub fn definitions(&self) -> Result<Definitions, ExprError> {
        self.definitions.iter().map(|(k, v)| Ok((k.clone(), self.expr(v)?))).collect::<Result<_, ExprError>>()
    }

    /// The context at truncation order `order` with default grades.
    pub fn context(&self, order: u32) -> Result<Arc<Uea>, SetupError> {
        Ok(Uea::new(self.spec()?, GradingContext::new(order)))
    }

    pub fn chain(&self, ctx: &Arc<Uea>, defs: &Definitions) -> Result<TwistChain, SetupError> {
        let mut factors = Vec::new();
        for f in &self.factors {
            factors.push(match f {
                FactorSpec::Jordanian { name, h, arg } => {
                    let h = cartan(ctx, defs, &self.expr(h)?)?;
                    TwistFactor::jordanian(ctx, defs, name, &h, self.expr(arg)?)?
                }
                FactorSpec::Extension { name, left, right } => {
                    TwistFactor::extension(name, self.deformation, self.expr(left)?, self.expr(right)?)
                }
                FactorSpec::Generic { name, exponent } => TwistFactor::generic(name, self.expr(exponent)?),
            });
        }
        Ok(TwistChain::new(factors))
    }

    pub fn build(&self, order: u32) -> Result<Built, SetupError> {
        self.build_in(self.context(order)?)
    }

    pub fn build_in(&self, ctx: Arc<Uea>) -> Result<Built, SetupError> {
        let defs = self.definitions()?;
        let chain = self.chain(&ctx, &defs)?;
        let hopf = TwistedHopf::new(&ctx, &defs, chain)?;
        Ok(Built { setup: self.clone(), ctx, defs, hopf })
    }
}

/// Evaluate a degree-one expression as a Cartan element.
pub fn cartan(ctx: &Arc<Uea>, defs: &Definitions, e: &Expr) -> Result<CartanElement, SetupError> {
    let x = SymbolicEvaluator::new(ctx, defs).element(e)?;
    let spec = ctx.spec();
    let mut coefficients = Vec::new();
    for (m, c) in x.terms() {
        match (m.degree(), m.first_index()) {
            (1, Some(i)) if spec.is_cartan(i) => coefficients.push((i, c.clone())),
            _ => return Err(SetupError::Invalid(format!("`{e}` is not a Cartan element"))),
        }
    }
    coefficients.sort_by_key(|(i, _)| *i);
    Ok(CartanElement::new(coefficients))
}

/// A setup instantiated at a truncation order.
pub struct Built {
    pub setup: Setup,
    pub ctx: Arc<Uea>,
    pub defs: Definitions,
    pub hopf: TwistedHopf,
}
