//! The second classical limit: rescale generators and the deformation
//! parameter by `ε`, expand twisted coproducts in `ε` and keep the `ε⁰` part.
//!
//! Two independent routes are provided. [`ClassicalLimit::limit_coproduct`]
//! rescales the twist itself (`ln F_q = Ψ_q / ε`) and conjugates inside the
//! scaled algebra, where poles appear and must cancel.
//! [`ClassicalLimit::limit_by_degree`] rescales an already computed `Δ_F`
//! term by term.

use std::sync::Arc;

use crate::bialgebra::RMatrix;
use crate::expr::{Definitions, Expr, ExprError, SymbolicEvaluator};
use crate::lie::LieAlgebraSpec;
use crate::scalar::{Param, ParamScalar};
use crate::tables::{compare_entry, CoproductEntry, EntryStatus};
use crate::twist::{TwistChain, TwistError, TwistFactor, TwistedHopf};
use crate::uea::{Monomial, TensorElement, TensorKey, UElement, Uea, UeaError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LimitError {
    #[error("`{subject}` has an ε^{power} pole (e.g. {term}); the limit does not exist")]
    Pole { subject: String, power: i16, term: String },
    #[error("factor `{factor}` does not scale as Ψ/ε: {detail}")]
    SchemeMismatch { factor: String, detail: String },
    #[error("`{0}` is not homogeneous in ε after scaling")]
    Inhomogeneous(String),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Lie(#[from] crate::lie::LieError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Uea(#[from] UeaError),
}

/// The uniform substitution `e_j → ê_j / ε`, `from → ε · to`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingScheme {
    pub from: Param,
    pub to: Param,
}

impl Default for ScalingScheme {
    fn default() -> Self {
        Self { from: Param::Xi, to: Param::Zeta }
    }
}

impl ScalingScheme {
    /// Apply the substitution to an expression over `spec`.
    pub fn scale_expr(&self, spec: &LieAlgebraSpec, e: &Expr) -> Expr {
        let inv_eps = Expr::Pow(Box::new(Expr::Param(Param::Epsilon)), -1);
        let to = Expr::Param(Param::Epsilon).mul(Expr::Param(self.to));
        e.rewrite(&|node| match node {
            Expr::Name(n) if spec.element(n).is_ok() => Some(inv_eps.clone().mul(node.clone())),
            Expr::Param(p) if *p == self.from => Some(to.clone()),
            _ => None,
        })
    }

    pub fn scale_definitions(&self, spec: &LieAlgebraSpec, defs: &Definitions) -> Definitions {
        defs.iter().map(|(k, v)| (k.clone(), self.scale_expr(spec, v))).collect()
    }

    /// `c · ξ^k → c · ε^k ζ^k` on one coefficient.
    fn scale_scalar(&self, c: &ParamScalar) -> ParamScalar {
        let with = &ParamScalar::param(Param::Epsilon) * &ParamScalar::param(self.to);
        c.substitute(self.from, &with)
    }
}

/// `Δ^lim` of one subject together with its `ε` bookkeeping.
#[derive(Debug, Clone)]
pub struct LimitCoproduct {
    pub subject: String,
    /// Lowest `ε` power in the scaled coproduct; never negative here.
    pub lowest_power: i16,
    pub limit: TensorElement,
}

/// Scaled chain data and the contexts the limit lives in.
pub struct ClassicalLimit {
    scheme: ScalingScheme,
    base_ctx: Arc<Uea>,
    scaled_ctx: Arc<Uea>,
    scaled_defs: Definitions,
    limit_ctx: Arc<Uea>,
    scaled: TwistedHopf,
    psi: Vec<(String, TensorElement)>,
}

fn eps_power(c: &ParamScalar) -> Option<(i16, i16)> {
    Some((c.min_exponent(Param::Epsilon)?, c.max_exponent(Param::Epsilon)?))
}

fn tensor_eps_range(t: &TensorElement) -> Option<(i16, i16)> {
    t.terms().filter_map(|(_, c)| eps_power(c)).reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))
}

impl ClassicalLimit {
    /// Rescale every factor of the chain behind `hopf`; each exponent must
    /// become `Ψ_q / ε` with `Ψ_q` free of `ε`.
    pub fn new(hopf: &TwistedHopf, scheme: ScalingScheme) -> Result<Self, LimitError> {
        let base_ctx = hopf.ctx().clone();
        let spec = base_ctx.spec();
        let scaled_ctx = Uea::new(spec.scaled(), base_ctx.grading().clone());
        let limit_ctx = Uea::new(
            spec.scaled().specialize(Param::Epsilon, &ParamScalar::zero()),
            base_ctx.grading().clone(),
        );
        let scaled_defs = scheme.scale_definitions(spec, hopf.defs());
        let ev = SymbolicEvaluator::new(&scaled_ctx, &scaled_defs);
        let eps = ParamScalar::param(Param::Epsilon);
        let mut factors = Vec::new();
        let mut psi = Vec::new();
        for f in &hopf.chain().factors {
            let exponent = scheme.scale_expr(spec, &f.exponent);
            let x = ev.tensor(&exponent, 2)?;
            let p = x.scale(&eps);
            if let Some((lo, hi)) = tensor_eps_range(&p) {
                if lo != 0 || hi != 0 {
                    return Err(LimitError::SchemeMismatch {
                        factor: f.name.clone(),
                        detail: format!("ε·X contains powers ε^{lo} … ε^{hi}"),
                    });
                }
            }
            psi.push((f.name.clone(), p));
            factors.push(TwistFactor::generic(&f.name, exponent));
        }
        let scaled = TwistedHopf::new(&scaled_ctx, &scaled_defs, TwistChain::new(factors))?;
        Ok(Self { scheme, base_ctx, scaled_ctx, scaled_defs, limit_ctx, scaled, psi })
    }

    pub fn scheme(&self) -> ScalingScheme {
        self.scheme
    }

    /// `Ψ_q = ε ln F_q` for each factor, in chain order.
    pub fn psi(&self) -> &[(String, TensorElement)] {
        &self.psi
    }

    /// The algebra of scaled generators, with brackets of order `ε`.
    pub fn scaled_ctx(&self) -> &Arc<Uea> {
        &self.scaled_ctx
    }

    /// Definitions after scaling (`sigma` becomes `ln(1 + ζ ê13)`).
    pub fn scaled_definitions(&self) -> &Definitions {
        &self.scaled_defs
    }

    /// The commutative algebra at `ε = 0`, where `Δ^lim` lives.
    pub fn limit_ctx(&self) -> &Arc<Uea> {
        &self.limit_ctx
    }

    /// The scaled form of `subject` (an expression in unscaled generators)
    /// and the power `p` with `ε^p · subject|scaled` free of `ε`.
    fn scaled_subject(&self, subject: &Expr) -> Result<(UElement, i16), LimitError> {
        let ev = SymbolicEvaluator::new(&self.scaled_ctx, &self.scaled_defs);
        let y = ev.element(&self.scheme.scale_expr(self.base_ctx.spec(), subject))?;
        let range = y.terms().filter_map(|(_, c)| eps_power(c)).reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)));
        let p = match range {
            Some((lo, hi)) if lo == hi => -lo,
            None => 0,
            Some(_) => return Err(LimitError::Inhomogeneous(subject.to_string())),
        };
        Ok((y.scale(&ParamScalar::epsilon_pow(p)), p))
    }

    fn extract(&self, subject: &Expr, expansion: &TensorElement) -> Result<LimitCoproduct, LimitError> {
        let lowest = tensor_eps_range(expansion).map_or(0, |r| r.0);
        if lowest < 0 {
            let (k, c) = expansion
                .sorted_terms()
                .into_iter()
                .find(|(_, c)| c.min_exponent(Param::Epsilon) == Some(lowest))
                .expect("a term attains the lowest power");
            let term = format!("({}) {}", c.part_with_exponent(Param::Epsilon, lowest), expansion.render_key(k));
            return Err(LimitError::Pole { subject: subject.to_string(), power: lowest, term });
        }
        let limit = expansion
            .map_coefficients(|c| c.part_with_exponent(Param::Epsilon, 0))
            .transfer(&self.limit_ctx);
        Ok(LimitCoproduct { subject: subject.to_string(), lowest_power: lowest, limit })
    }

    /// `Δ^lim` by conjugating with the scaled twist `exp(Ψ_q/ε)` inside the
    /// scaled algebra and taking the `ε⁰` part.
    pub fn limit_coproduct(&self, subject: &Expr) -> Result<LimitCoproduct, LimitError> {
        let (y, _) = self.scaled_subject(subject)?;
        let expansion = self.scaled.coproduct(&y)?;
        self.extract(subject, &expansion)
    }

    /// `Δ^lim` from `Δ_F` computed in the unscaled algebra: a term
    /// `ξ^k · (monomial of total degree d)` becomes `ε^{p+k−d} ζ^k`.
    pub fn limit_by_degree(&self, hopf: &TwistedHopf, subject: &Expr) -> Result<LimitCoproduct, LimitError> {
        let (_, p) = self.scaled_subject(subject)?;
        let x = hopf.evaluator().element(subject)?;
        let d = hopf.coproduct(&x)?;
        let terms = d.terms().map(|(k, c)| {
            let deg: i16 = k.iter().map(|m| m.degree() as i16).sum();
            let c = &self.scheme.scale_scalar(c) * &ParamScalar::epsilon_pow(p - deg);
            (k.clone(), c)
        });
        let expansion = TensorElement::from_terms(&self.scaled_ctx, 2, terms.collect::<Vec<_>>());
        self.extract(subject, &expansion)
    }

    /// Compare `Δ^lim` against reference entries written in scaled generators.
    pub fn compare_table(&self, table: &[CoproductEntry]) -> Result<Vec<(String, EntryStatus)>, LimitError> {
        let mut out = Vec::new();
        for entry in table {
            let lim = self.limit_coproduct(&Expr::parse(entry.subject)?)?;
            out.push((entry.subject.to_string(), compare_entry(&self.limit_ctx, &self.scaled_defs, entry, &lim.limit)?));
        }
        Ok(out)
    }

    /// Compare each `Ψ_q` with a reference `(factor name, form)` list.
    pub fn compare_psi(&self, forms: &[(&str, &str)]) -> Result<Vec<(String, Option<String>)>, LimitError> {
        let ev = SymbolicEvaluator::new(&self.scaled_ctx, &self.scaled_defs);
        let mut out = Vec::new();
        for (name, form) in forms {
            let expected = ev.tensor(&Expr::parse(form)?, 2)?;
            let diff = match self.psi.iter().find(|(n, _)| n == name) {
                Some((_, got)) => {
                    let d = got.sub(&expected)?;
                    (!d.is_zero()).then(|| d.render())
                }
                None => Some(format!("no factor named `{name}`")),
            };
            out.push((name.to_string(), diff));
        }
        Ok(out)
    }

    /// The top-degree part (`d = k + 1`) of an unscaled tensor, with
    /// `ξ^k → ζ^k`, as an element of the limit algebra. Applied to a
    /// reference `Δ_F` entry this predicts the corresponding `Δ^lim`.
    pub fn top_degree(&self, t: &TensorElement, subject_power: i16) -> TensorElement {
        let from = self.scheme.from;
        let to = ParamScalar::param(self.scheme.to);
        let mut terms = Vec::new();
        for (k, c) in t.terms() {
            let deg: i16 = k.iter().map(|m| m.degree() as i16).sum();
            let keep = c.filter_terms(|e| e[from.index()] + subject_power == deg);
            if !keep.is_zero() {
                terms.push((k.clone(), keep.substitute(from, &to)));
            }
        }
        TensorElement::from_terms(&self.limit_ctx, t.rank(), terms)
    }

    /// Structural agreement of `Δ^lim` with reference `Δ_F` entries: the
    /// top-degree part of each reference form must equal the computed limit.
    /// Returns the rendered difference for each disagreeing subject.
    pub fn structural_agreement(
        &self,
        hopf: &TwistedHopf,
        table: &[CoproductEntry],
    ) -> Result<Vec<(String, Option<String>)>, LimitError> {
        let ev = hopf.evaluator();
        let mut out = Vec::new();
        for entry in table {
            let subject = Expr::parse(entry.subject)?;
            let (_, p) = self.scaled_subject(&subject)?;
            let reference = ev.tensor(&Expr::parse(entry.printed)?, 2)?;
            let predicted = self.top_degree(&reference, p);
            let lim = self.limit_coproduct(&subject)?.limit;
            let diff = lim.sub(&predicted)?;
            out.push((entry.subject.to_string(), (!diff.is_zero()).then(|| diff.render())));
        }
        Ok(out)
    }

    /// Residual of `δ(ê) = ∂_ζ (Δ^lim − τΔ^lim)(ê)|_{ζ=0}` against `[r, Δ⁰(ê)]`.
    pub fn cobracket_residual(&self, r: &RMatrix, generator: usize) -> Result<TensorElement, LimitError> {
        let spec = self.base_ctx.spec();
        let lim = self.limit_coproduct(&Expr::name(spec.label(generator)))?.limit;
        let to = self.scheme.to;
        let first = lim.map_coefficients(|c| {
            c.part_with_exponent(to, 1).div_param_pow(to, 1).expect("divisible by construction")
        });
        let antisym = first.sub(&first.flip())?;
        let delta = crate::bialgebra::cobracket(spec, r, &crate::lie::LieElement::basis(spec, generator))
?;
        let dim = spec.dim();
        let delta = TensorElement::from_terms(
            &self.limit_ctx,
            2,
            delta
                .terms()
                .map(|(k, c)| {
                    let key: TensorKey = k.iter().map(|i| Monomial::generator(dim, *i)).collect();
                    (key, c.clone())
                })
                .collect::<Vec<_>>(),
        );
        Ok(antisym.sub(&delta)?)
    }

    /// Pairs `(i, j)` where `[ê_i, ê_j] ≠ ε · Σ c_{ij}^k ê_k`.
    pub fn scaled_commutator_defects(&self) -> Result<Vec<(usize, usize)>, LimitError> {
        let eps = ParamScalar::param(Param::Epsilon);
        let n = self.base_ctx.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let base = UElement::generator(&self.base_ctx, i).commutator(&UElement::generator(&self.base_ctx, j))?;
                let want = base.transfer(&self.scaled_ctx).scale(&eps);
                let got = UElement::generator(&self.scaled_ctx, i)
                    .commutator(&UElement::generator(&self.scaled_ctx, j))?;
                let linear = got.terms().all(|(m, _)| m.degree() == 1);
                if !got.sub(&want)?.is_zero() || !linear {
                    out.push((i, j));
                }
            }
        }
        Ok(out)
    }
}
