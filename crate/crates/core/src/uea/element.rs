use std::cmp::Reverse;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::series::GradedSeries;
use super::{accumulate, Monomial, TensorElement, TensorKey, Uea, UeaError};
use crate::lie::LieElement;
use crate::scalar::{Param, ParamScalar, Rational};

/// An element of `U(g)` in PBW normal form, truncated by the context's grading.
#[derive(Clone)]
pub struct UElement {
    ctx: Arc<Uea>,
    terms: FxHashMap<Monomial, ParamScalar>,
    truncated: bool,
}

impl PartialEq for UElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same(&other.ctx) && self.terms == other.terms
    }
}

impl std::fmt::Debug for UElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "UElement({})", self.render())
    }
}

impl UElement {
    pub fn zero(ctx: &Arc<Uea>) -> Self {
        Self { ctx: ctx.clone(), terms: FxHashMap::default(), truncated: false }
    }

    pub fn one(ctx: &Arc<Uea>) -> Self {
        Self::scalar(ctx, ParamScalar::one())
    }

    pub fn scalar(ctx: &Arc<Uea>, c: ParamScalar) -> Self {
        Self::from_terms(ctx, [(ctx.unit_monomial(), c)])
    }

    pub fn generator(ctx: &Arc<Uea>, i: usize) -> Self {
        Self::from_terms(ctx, [(Monomial::generator(ctx.dim(), i), ParamScalar::one())])
    }

    /// Generator or derived element by label.
    pub fn named(ctx: &Arc<Uea>, label: &str) -> Result<Self, UeaError> {
        let x = ctx.spec().element(label)?;
        Ok(Self::from_lie(ctx, &x))
    }

    pub fn from_lie(ctx: &Arc<Uea>, x: &LieElement) -> Self {
        Self::from_terms(ctx, x.terms().map(|(i, c)| (Monomial::generator(ctx.dim(), i), c.clone())))
    }

    /// Build from monomial terms, dropping anything above the grade cap.
    pub fn from_terms(ctx: &Arc<Uea>, terms: impl IntoIterator<Item = (Monomial, ParamScalar)>) -> Self {
        let mut out = Self::zero(ctx);
        for (m, c) in terms {
            out.push(m, &c);
        }
        out
    }

    fn push(&mut self, m: Monomial, c: &ParamScalar) {
        let (c, dropped) = c.truncate(self.ctx.grading());
        self.truncated |= dropped;
        accumulate(&mut self.terms, m, &c);
    }

    /// Normal-ordered expansion of a product of generators.
    pub fn normal_order(ctx: &Arc<Uea>, word: &[usize]) -> Self {
        let mut acc = Self::one(ctx);
        for &g in word {
            acc = acc.mul(&Self::generator(ctx, g)).expect("same context");
        }
        acc
    }

    pub fn ctx(&self) -> &Arc<Uea> {
        &self.ctx
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub(crate) fn set_truncated(&mut self, t: bool) {
        self.truncated |= t;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> ParamScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Terms in display order: by degree, then by reverse basis order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &ParamScalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(m, _)| (m.degree(), Reverse((*m).clone())));
        v
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ParamScalar)> {
        self.terms.iter()
    }

    fn check(&self, other: &Self) -> Result<(), UeaError> {
        if self.ctx.same(&other.ctx) {
            Ok(())
        } else {
            Err(UeaError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, UeaError> {
        self.check(other)?;
        let mut out = self.clone();
        out.truncated |= other.truncated;
        for (m, c) in &other.terms {
            accumulate(&mut out.terms, m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, UeaError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&ParamScalar::from_int(-1))
    }

    pub fn scale(&self, c: &ParamScalar) -> Self {
        let mut out = Self::zero(&self.ctx);
        out.truncated = self.truncated;
        for (m, x) in &self.terms {
            let (p, dropped) = x.mul_truncated(c, self.ctx.grading());
            out.truncated |= dropped;
            accumulate(&mut out.terms, m.clone(), &p);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, UeaError> {
        self.check(other)?;
        let g = self.ctx.grading();
        let mut out = Self::zero(&self.ctx);
        out.truncated = self.truncated || other.truncated;
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let (c, dropped) = ca.mul_truncated(cb, g);
                out.truncated |= dropped;
                if c.is_zero() {
                    continue;
                }
                for (m, s) in self.ctx.mono_mul(ma, mb).iter() {
                    let (p, dropped) = c.mul_truncated(s, g);
                    out.truncated |= dropped;
                    accumulate(&mut out.terms, m.clone(), &p);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..n {
            acc = acc.mul(self).expect("same context");
        }
        acc
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, UeaError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Counit: the coefficient of the unit monomial.
    pub fn counit(&self) -> ParamScalar {
        self.coefficient(&self.ctx.unit_monomial())
    }

    /// The primitive coproduct, extended multiplicatively.
    pub fn coproduct0(&self) -> TensorElement {
        let mut out = TensorElement::zero(&self.ctx, 2);
        for (m, c) in &self.terms {
            for (l, r, b) in self.ctx.coproduct0_monomial(m).iter() {
                out.push_term(TensorKey::from_iter([l.clone(), r.clone()]), &(c * b));
            }
        }
        out.set_truncated(self.truncated);
        out
    }

    /// Apply a coefficient map term by term (re-truncating).
    pub fn map_coefficients(&self, mut f: impl FnMut(&ParamScalar) -> ParamScalar) -> Self {
        let mut out = Self::zero(&self.ctx);
        out.truncated = self.truncated;
        for (m, c) in &self.terms {
            out.push(m.clone(), &f(c));
        }
        out
    }

    pub fn substitute(&self, p: Param, value: &ParamScalar) -> Self {
        self.map_coefficients(|c| c.substitute(p, value))
    }

    /// The same element in another context with an identical basis.
    pub fn transfer(&self, ctx: &Arc<Uea>) -> Self {
        assert_eq!(self.ctx.dim(), ctx.dim(), "transfer between algebras of different dimension");
        let mut out = Self::zero(ctx);
        out.truncated = self.truncated;
        for (m, c) in &self.terms {
            out.push(m.clone(), c);
        }
        out
    }

    /// Keep only the terms for which the predicate holds.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial, &ParamScalar) -> bool) -> Self {
        let mut out = Self::zero(&self.ctx);
        out.truncated = self.truncated;
        for (m, c) in &self.terms {
            if keep(m, c) {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn render(&self) -> String {
        let labels = self.ctx.spec().labels();
        crate::render::join_terms(self.sorted_terms().into_iter().map(|(m, c)| (c.clone(), m.render(labels))))
    }
}

impl GradedSeries for UElement {
    fn one_like(&self) -> Self {
        Self::one(&self.ctx)
    }
    fn is_zero_series(&self) -> bool {
        self.is_zero()
    }
    fn min_grade(&self) -> Option<i32> {
        self.terms.values().filter_map(|c| c.min_grade(self.ctx.grading())).min()
    }
    fn mul_series(&self, other: &Self) -> Self {
        self.mul(other).expect("same context")
    }
    fn add_series(&self, other: &Self) -> Self {
        self.add(other).expect("same context")
    }
    fn scale_series(&self, c: &Rational) -> Self {
        self.scale(&ParamScalar::constant(c.clone()))
    }
    fn unit_coefficient(&self) -> ParamScalar {
        self.counit()
    }
    fn describe(&self) -> String {
        self.render()
    }
}
