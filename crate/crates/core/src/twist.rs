//! Twisting elements, twisted coproducts and the cocycle identities.

use std::sync::Arc;

use parking_lot::RwLock;
use rustc_hash::FxHashMap;

use crate::expr::{Definitions, Expr, ExprError, SymbolicEvaluator};
use crate::lie::{CartanElement, LieAlgebraSpec};
use crate::scalar::{Param, ParamScalar};
use crate::uea::{GradedSeries, TensorElement, TensorOrElement, UElement, Uea, UeaError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TwistError {
    #[error("Jordanian normalization fails: {0}")]
    Normalization(String),
    #[error("factor `{0}` has a zero-grade exponent; its exponential does not truncate")]
    NonTruncatable(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Uea(#[from] UeaError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum FactorKind {
    /// `exp(h ⊗ σ)` with `σ = ln(1 + ξ e_μ)` and `μ(h) = 1`.
    Jordanian { h: CartanElement, carrier: usize },
    /// `exp(ξ · left ⊗ right)`.
    Extension { left: Expr, right: Expr },
    /// `exp(X)` for an arbitrary rank-2 exponent.
    Generic,
}

/// One factor `F_q = exp(X_q)` of a chain, stored by its exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistFactor {
    pub name: String,
    pub kind: FactorKind,
    pub exponent: Expr,
}

/// `Σ c_i label_i` as an expression.
pub fn lie_expr(spec: &LieAlgebraSpec, h: &CartanElement) -> Expr {
    let mut acc: Option<Expr> = None;
    for (i, c) in &h.coefficients {
        let term = scalar_expr(c).mul(Expr::name(spec.label(*i)));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(term),
        });
    }
    acc.unwrap_or(Expr::num(0))
}

/// A parameter polynomial as an expression.
pub fn scalar_expr(c: &ParamScalar) -> Expr {
    Expr::parse(&c.to_string()).expect("canonical scalar text parses")
}

impl TwistFactor {
    /// Jordanian factor `exp(h ⊗ arg)`. The lowest-grade part of `arg` must be
    /// a multiple of a single root vector `e_μ` with `μ(h) = 1`.
    pub fn jordanian(
        ctx: &Arc<Uea>,
        defs: &Definitions,
        name: &str,
        h: &CartanElement,
        arg: Expr,
    ) -> Result<Self, TwistError> {
        let spec = ctx.spec();
        let ev = SymbolicEvaluator::new(ctx, defs);
        let a = ev.element(&arg)?;
        let g = ctx.grading();
        let min = a.terms().filter_map(|(_, c)| c.min_grade(g)).min();
        let mut carrier = None;
        if let Some(min) = min {
            for (m, c) in a.terms() {
                let lowest = c.filter_terms(|e| g.grade_of(e) == min);
                if lowest.is_zero() {
                    continue;
                }
                match (m.degree(), m.first_index()) {
                    (1, Some(i)) if carrier.is_none() || carrier == Some(i) => carrier = Some(i),
                    _ => {
                        return Err(TwistError::Normalization(format!(
                            "leading part of `{arg}` is not a single root vector"
                        )))
                    }
                }
            }
        }
        let Some(carrier) = carrier else {
            // Zero argument: the factor is the identity.
            return Ok(Self { name: name.into(), kind: FactorKind::Generic, exponent: Expr::num(0) });
        };
        let mu = spec.weight_of(carrier, h);
        if !mu.is_one() {
            return Err(TwistError::Normalization(format!(
                "{}(h) = {mu}, expected 1",
                spec.label(carrier)
            )));
        }
        Ok(Self {
            name: name.into(),
            kind: FactorKind::Jordanian { h: h.clone(), carrier },
            exponent: Expr::Tensor(vec![lie_expr(spec, h), arg]),
        })
    }

    /// Extension factor `exp(p · left ⊗ right)`.
    pub fn extension(name: &str, param: Param, left: Expr, right: Expr) -> Self {
        Self {
            name: name.into(),
            kind: FactorKind::Extension { left: left.clone(), right: right.clone() },
            exponent: Expr::Tensor(vec![Expr::Param(param).mul(left), right]),
        }
    }

    pub fn generic(name: &str, exponent: Expr) -> Self {
        Self { name: name.into(), kind: FactorKind::Generic, exponent }
    }

    /// The exponent `X_q` as a rank-2 tensor.
    pub fn exponent_tensor(&self, ctx: &Arc<Uea>, defs: &Definitions) -> Result<TensorElement, TwistError> {
        let x = SymbolicEvaluator::new(ctx, defs).tensor(&self.exponent, 2)?;
        if x.min_grade().is_some_and(|g| g <= 0) {
            return Err(TwistError::NonTruncatable(self.name.clone()));
        }
        Ok(x)
    }
}

/// Factors `[F_p, …, F_1]`; the product `F_p ⋯ F_1` applies `F_1` first.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistChain {
    pub factors: Vec<TwistFactor>,
}

impl TwistChain {
    pub fn new(factors: Vec<TwistFactor>) -> Self {
        Self { factors }
    }

    /// The sub-chain `F_{q-1} ⋯ F_1` preceding factor `q` (index into `factors`).
    pub fn below(&self, q: usize) -> TwistChain {
        TwistChain { factors: self.factors[q + 1..].to_vec() }
    }
}

/// `U(g)` with the coproduct twisted by a chain.
pub struct TwistedHopf {
    ctx: Arc<Uea>,
    defs: Definitions,
    chain: TwistChain,
    f: TensorElement,
    f_inv: TensorElement,
    factors: Vec<(TensorElement, TensorElement)>,
    cache: RwLock<FxHashMap<usize, TensorElement>>,
}

impl TwistedHopf {
    pub fn new(ctx: &Arc<Uea>, defs: &Definitions, chain: TwistChain) -> Result<Self, TwistError> {
        let mut factors = Vec::new();
        for fac in &chain.factors {
            let x = fac.exponent_tensor(ctx, defs)?;
            factors.push((x.exp_graded()?, x.neg().exp_graded()?));
        }
        let mut f = TensorElement::one(ctx, 2);
        let mut f_inv = TensorElement::one(ctx, 2);
        for (fq, fq_inv) in &factors {
            f = f.mul(fq)?;
            f_inv = fq_inv.mul(&f_inv)?;
        }
        Ok(Self {
            ctx: ctx.clone(),
            defs: defs.clone(),
            chain,
            f,
            f_inv,
            factors,
            cache: RwLock::new(FxHashMap::default()),
        })
    }

    pub fn ctx(&self) -> &Arc<Uea> {
        &self.ctx
    }

    pub fn defs(&self) -> &Definitions {
        &self.defs
    }

    pub fn chain(&self) -> &TwistChain {
        &self.chain
    }

    /// The twisting element `F`.
    pub fn twist(&self) -> &TensorElement {
        &self.f
    }

    pub fn twist_inverse(&self) -> &TensorElement {
        &self.f_inv
    }

    /// `exp(X_q)` and its inverse for each factor, in chain order.
    pub fn factor_elements(&self) -> &[(TensorElement, TensorElement)] {
        &self.factors
    }

    pub fn evaluator(&self) -> SymbolicEvaluator<'_> {
        SymbolicEvaluator::new(&self.ctx, &self.defs)
    }

    /// `Δ_F(x) = F Δ⁰(x) F⁻¹`.
    pub fn coproduct(&self, x: &UElement) -> Result<TensorElement, TwistError> {
        Ok(self.f.mul(&x.coproduct0())?.mul(&self.f_inv)?)
    }

    /// `Δ_F` of a basis generator, memoized.
    pub fn coproduct_generator(&self, i: usize) -> Result<TensorElement, TwistError> {
        if let Some(hit) = self.cache.read().get(&i) {
            return Ok(hit.clone());
        }
        let out = self.coproduct(&UElement::generator(&self.ctx, i))?;
        self.cache.write().insert(i, out.clone());
        Ok(out)
    }

    /// `(Δ_F ⊗ id)(t)` (leg 1) or `(id ⊗ Δ_F)(t)` (leg 2) for a rank-2 `t`.
    pub fn apply_coproduct(&self, t: &TensorElement, leg: usize) -> Result<TensorElement, TwistError> {
        let (a, b) = if leg == 1 {
            (self.f.insert_unit_leg(2), self.f_inv.insert_unit_leg(2))
        } else {
            (self.f.insert_unit_leg(0), self.f_inv.insert_unit_leg(0))
        };
        Ok(a.mul(&t.apply_coproduct0(leg)?)?.mul(&b)?)
    }

    /// `(Δ_F ⊗ id)Δ_F(x) − (id ⊗ Δ_F)Δ_F(x)`.
    pub fn coassociativity_residual(&self, x: &UElement) -> Result<TensorElement, TwistError> {
        let d = self.coproduct(x)?;
        Ok(self.apply_coproduct(&d, 1)?.sub(&self.apply_coproduct(&d, 2)?)?)
    }

    /// `F_12 (Δ⁰ ⊗ id)F − F_23 (id ⊗ Δ⁰)F` for the full chain.
    pub fn cocycle_residual(&self) -> Result<TensorElement, TwistError> {
        cocycle_residual_relative(&self.f, &TensorElement::one(&self.ctx, 2), &TensorElement::one(&self.ctx, 2))
    }

    /// Cocycle residual of factor `q` relative to the coproduct twisted by the
    /// factors below it.
    pub fn factor_cocycle_residual(&self, q: usize) -> Result<TensorElement, TwistError> {
        let mut below = TensorElement::one(&self.ctx, 2);
        let mut below_inv = TensorElement::one(&self.ctx, 2);
        for (fq, fq_inv) in &self.factors[q + 1..] {
            below = below.mul(fq)?;
            below_inv = fq_inv.mul(&below_inv)?;
        }
        cocycle_residual_relative(&self.factors[q].0, &below, &below_inv)
    }

    /// `R = F_21 F⁻¹`.
    pub fn universal_r(&self) -> Result<TensorElement, TwistError> {
        Ok(self.f.flip().mul(&self.f_inv)?)
    }

    /// `(ε ⊗ id)F − 1` and `(id ⊗ ε)F − 1`; both must vanish.
    pub fn counit_defects(&self) -> Result<[UElement; 2], TwistError> {
        let one = UElement::one(&self.ctx);
        let leg = |l: usize| -> Result<UElement, TwistError> {
            match self.f.counit_leg(l)? {
                TensorOrElement::Element(e) => Ok(e.sub(&one)?),
                _ => unreachable!("rank 2 contracts to an element"),
            }
        };
        Ok([leg(1)?, leg(2)?])
    }
}

/// `F_12 (Δ_P ⊗ id)F − F_23 (id ⊗ Δ_P)F` where `Δ_P = P Δ⁰ P⁻¹`.
pub fn cocycle_residual_relative(
    f: &TensorElement,
    p: &TensorElement,
    p_inv: &TensorElement,
) -> Result<TensorElement, TwistError> {
    let left = {
        let d = p.insert_unit_leg(2).mul(&f.apply_coproduct0(1)?)?.mul(&p_inv.insert_unit_leg(2))?;
        f.insert_unit_leg(2).mul(&d)?
    };
    let right = {
        let d = p.insert_unit_leg(0).mul(&f.apply_coproduct0(2)?)?.mul(&p_inv.insert_unit_leg(0))?;
        f.insert_unit_leg(0).mul(&d)?
    };
    Ok(left.sub(&right)?)
}
