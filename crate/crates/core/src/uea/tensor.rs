use std::cmp::Reverse;
use std::sync::Arc;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::series::GradedSeries;
use super::{accumulate, Monomial, UElement, Uea, UeaError};
use crate::scalar::{Param, ParamScalar, Rational};

/// One PBW monomial per tensor leg.
pub type TensorKey = SmallVec<[Monomial; 3]>;

/// An element of `U(g)^{⊗k}`, leg-wise normal ordered.
#[derive(Clone)]
pub struct TensorElement {
    ctx: Arc<Uea>,
    rank: usize,
    terms: FxHashMap<TensorKey, ParamScalar>,
    truncated: bool,
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same(&other.ctx) && self.rank == other.rank && self.terms == other.terms
    }
}

impl std::fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TensorElement[{}]({})", self.rank, self.render())
    }
}

const PARALLEL_THRESHOLD: usize = 4096;

impl TensorElement {
    pub fn zero(ctx: &Arc<Uea>, rank: usize) -> Self {
        assert!((1..=3).contains(&rank), "tensor rank must be 1, 2 or 3");
        Self { ctx: ctx.clone(), rank, terms: FxHashMap::default(), truncated: false }
    }

    pub fn one(ctx: &Arc<Uea>, rank: usize) -> Self {
        let mut t = Self::zero(ctx, rank);
        t.push_term((0..rank).map(|_| ctx.unit_monomial()).collect(), &ParamScalar::one());
        t
    }

    /// `x_1 ⊗ x_2 ⊗ …`
    pub fn from_legs(legs: &[UElement]) -> Result<Self, UeaError> {
        let ctx = legs[0].ctx().clone();
        let mut out = Self::zero(&ctx, legs.len());
        out.push_term((0..legs.len()).map(|_| ctx.unit_monomial()).collect(), &ParamScalar::one());
        for (i, x) in legs.iter().enumerate() {
            if !x.ctx().same(&ctx) {
                return Err(UeaError::ContextMismatch);
            }
            let mut next = Self::zero(&ctx, legs.len());
            next.truncated = out.truncated || x.is_truncated();
            for (k, c) in &out.terms {
                for (m, d) in x.terms() {
                    let mut key = k.clone();
                    key[i] = m.clone();
                    next.push_term(key, &(c * d));
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// `x` placed in leg `position` (1-based) of a rank-`rank` tensor.
    pub fn embed_leg(x: &UElement, position: usize, rank: usize) -> Result<Self, UeaError> {
        if position == 0 || position > rank {
            return Err(UeaError::LegOutOfRange { leg: position, rank });
        }
        let ctx = x.ctx();
        let legs: Vec<UElement> =
            (1..=rank).map(|i| if i == position { x.clone() } else { UElement::one(ctx) }).collect();
        Self::from_legs(&legs)
    }

    pub(crate) fn push_term(&mut self, key: TensorKey, c: &ParamScalar) {
        debug_assert_eq!(key.len(), self.rank);
        let (c, dropped) = c.truncate(self.ctx.grading());
        self.truncated |= dropped;
        accumulate(&mut self.terms, key, &c);
    }

    pub(crate) fn set_truncated(&mut self, t: bool) {
        self.truncated |= t;
    }

    pub fn ctx(&self) -> &Arc<Uea> {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorKey, &ParamScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &[Monomial]) -> ParamScalar {
        let k: TensorKey = key.iter().cloned().collect();
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    /// Terms in display order.
    pub fn sorted_terms(&self) -> Vec<(&TensorKey, &ParamScalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_cached_key(|(k, _)| {
            let total: u32 = k.iter().map(Monomial::degree).sum();
            let legs: Vec<(Reverse<u32>, Reverse<Monomial>)> =
                k.iter().map(|m| (Reverse(m.degree()), Reverse(m.clone()))).collect();
            (total, legs)
        });
        v
    }

    fn check(&self, other: &Self) -> Result<(), UeaError> {
        if !self.ctx.same(&other.ctx) {
            return Err(UeaError::ContextMismatch);
        }
        if self.rank != other.rank {
            return Err(UeaError::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, UeaError> {
        self.check(other)?;
        let mut out = self.clone();
        out.truncated |= other.truncated;
        for (k, c) in &other.terms {
            accumulate(&mut out.terms, k.clone(), c);
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
        let mut out = Self::zero(&self.ctx, self.rank);
        out.truncated = self.truncated;
        for (k, x) in &self.terms {
            let (p, dropped) = x.mul_truncated(c, self.ctx.grading());
            out.truncated |= dropped;
            accumulate(&mut out.terms, k.clone(), &p);
        }
        out
    }

    fn mul_into(
        ctx: &Uea,
        lhs: &[(&TensorKey, &ParamScalar)],
        rhs: &FxHashMap<TensorKey, ParamScalar>,
    ) -> (FxHashMap<TensorKey, ParamScalar>, bool) {
        let g = ctx.grading();
        let mut out = FxHashMap::default();
        let mut dropped_any = false;
        for (ka, ca) in lhs {
            for (kb, cb) in rhs {
                let (c, dropped) = ca.mul_truncated(cb, g);
                dropped_any |= dropped;
                if c.is_zero() {
                    continue;
                }
                let legs: SmallVec<[_; 3]> = ka.iter().zip(kb.iter()).map(|(a, b)| ctx.mono_mul(a, b)).collect();
                let mut partial: Vec<(TensorKey, ParamScalar)> = vec![(TensorKey::new(), c)];
                for leg in &legs {
                    let mut next = Vec::with_capacity(partial.len() * leg.len());
                    for (k, c) in &partial {
                        for (m, s) in leg.iter() {
                            let mut k2 = k.clone();
                            k2.push(m.clone());
                            next.push((k2, if s.is_one() { c.clone() } else { c * s }));
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial {
                    let (c, dropped) = c.truncate(g);
                    dropped_any |= dropped;
                    accumulate(&mut out, k, &c);
                }
            }
        }
        (out, dropped_any)
    }

    /// Leg-wise product.
    pub fn mul(&self, other: &Self) -> Result<Self, UeaError> {
        self.check(other)?;
        let lhs: Vec<(&TensorKey, &ParamScalar)> = self.terms.iter().collect();
        let (terms, dropped) = if lhs.len() * other.terms.len() >= PARALLEL_THRESHOLD && lhs.len() > 1 {
            let chunk = lhs.len().div_ceil(rayon::current_num_threads() * 4).max(1);
            lhs.par_chunks(chunk)
                .map(|part| Self::mul_into(&self.ctx, part, &other.terms))
                .reduce(
                    || (FxHashMap::default(), false),
                    |(mut a, da), (b, db)| {
                        if a.len() < b.len() {
                            let mut b = b;
                            for (k, c) in a {
                                accumulate(&mut b, k, &c);
                            }
                            return (b, da || db);
                        }
                        for (k, c) in b {
                            accumulate(&mut a, k, &c);
                        }
                        (a, da || db)
                    },
                )
        } else {
            Self::mul_into(&self.ctx, &lhs, &other.terms)
        };
        Ok(Self { ctx: self.ctx.clone(), rank: self.rank, terms, truncated: dropped || self.truncated || other.truncated })
    }

    /// Conjugation `a · self · b`.
    pub fn sandwich(&self, a: &Self, b: &Self) -> Result<Self, UeaError> {
        a.mul(self)?.mul(b)
    }

    /// Reorder legs: leg `i` of the result is leg `perm[i]` of `self` (0-based).
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rank);
        let mut out = Self::zero(&self.ctx, self.rank);
        out.truncated = self.truncated;
        for (k, c) in &self.terms {
            let key: TensorKey = perm.iter().map(|&p| k[p].clone()).collect();
            out.terms.insert(key, c.clone());
        }
        out
    }

    /// `τ(a ⊗ b) = b ⊗ a` for rank 2.
    pub fn flip(&self) -> Self {
        assert_eq!(self.rank, 2, "flip needs rank 2");
        self.permute(&[1, 0])
    }

    /// Apply `Δ⁰` to leg `leg` (1-based), producing rank `k + 1`.
    pub fn apply_coproduct0(&self, leg: usize) -> Result<Self, UeaError> {
        if leg == 0 || leg > self.rank {
            return Err(UeaError::LegOutOfRange { leg, rank: self.rank });
        }
        if self.rank >= 3 {
            return Err(UeaError::RankMismatch(self.rank + 1, 3));
        }
        let i = leg - 1;
        let mut out = Self::zero(&self.ctx, self.rank + 1);
        out.truncated = self.truncated;
        for (k, c) in &self.terms {
            for (l, r, b) in self.ctx.coproduct0_monomial(&k[i]).iter() {
                let mut key = TensorKey::new();
                for (j, m) in k.iter().enumerate() {
                    if j == i {
                        key.push(l.clone());
                        key.push(r.clone());
                    } else {
                        key.push(m.clone());
                    }
                }
                out.push_term(key, &(c * b));
            }
        }
        Ok(out)
    }

    /// Insert a unit leg at 0-based position `at`: `F ↦ F ⊗ 1` for `at = rank`,
    /// `1 ⊗ F` for `at = 0`.
    pub fn insert_unit_leg(&self, at: usize) -> Self {
        assert!(at <= self.rank && self.rank < 3);
        let mut out = Self::zero(&self.ctx, self.rank + 1);
        out.truncated = self.truncated;
        for (k, c) in &self.terms {
            let mut key = k.clone();
            key.insert(at, self.ctx.unit_monomial());
            out.terms.insert(key, c.clone());
        }
        out
    }

    /// Apply the counit to leg `leg` (1-based), producing rank `k − 1`.
    pub fn counit_leg(&self, leg: usize) -> Result<TensorOrElement, UeaError> {
        if leg == 0 || leg > self.rank {
            return Err(UeaError::LegOutOfRange { leg, rank: self.rank });
        }
        let i = leg - 1;
        if self.rank == 1 {
            return Ok(TensorOrElement::Scalar(self.coefficient(&[self.ctx.unit_monomial()])));
        }
        let mut out = Self::zero(&self.ctx, self.rank - 1);
        out.truncated = self.truncated;
        for (k, c) in &self.terms {
            if k[i].is_unit() {
                let key: TensorKey =
                    k.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, m)| m.clone()).collect();
                accumulate(&mut out.terms, key, c);
            }
        }
        if out.rank == 1 {
            return Ok(TensorOrElement::Element(out.to_element()));
        }
        Ok(TensorOrElement::Tensor(out))
    }

    /// Rank-1 tensor as a plain element.
    pub fn to_element(&self) -> UElement {
        assert_eq!(self.rank, 1);
        let mut e = UElement::from_terms(&self.ctx, self.terms.iter().map(|(k, c)| (k[0].clone(), c.clone())));
        e.set_truncated(self.truncated);
        e
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(&ParamScalar) -> ParamScalar) -> Self {
        let mut out = Self::zero(&self.ctx, self.rank);
        out.truncated = self.truncated;
        for (k, c) in &self.terms {
            out.push_term(k.clone(), &f(c));
        }
        out
    }

    pub fn substitute(&self, p: Param, value: &ParamScalar) -> Self {
        self.map_coefficients(|c| c.substitute(p, value))
    }

    pub fn transfer(&self, ctx: &Arc<Uea>) -> Self {
        assert_eq!(self.ctx.dim(), ctx.dim());
        let mut out = Self::zero(ctx, self.rank);
        out.truncated = self.truncated;
        for (k, c) in &self.terms {
            out.push_term(k.clone(), c);
        }
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(&TensorKey, &ParamScalar) -> bool) -> Self {
        let mut out = Self::zero(&self.ctx, self.rank);
        out.truncated = self.truncated;
        for (k, c) in &self.terms {
            if keep(k, c) {
                out.terms.insert(k.clone(), c.clone());
            }
        }
        out
    }

    /// Build from raw keyed terms.
    pub fn from_terms(ctx: &Arc<Uea>, rank: usize, terms: impl IntoIterator<Item = (TensorKey, ParamScalar)>) -> Self {
        let mut out = Self::zero(ctx, rank);
        for (k, c) in terms {
            out.push_term(k, &c);
        }
        out
    }

    pub fn render_key(&self, k: &TensorKey) -> String {
        let labels = self.ctx.spec().labels();
        k.iter().map(|m| m.render(labels)).collect::<Vec<_>>().join(" ⊗ ")
    }

    pub fn render(&self) -> String {
        crate::render::join_terms(self.sorted_terms().into_iter().map(|(k, c)| (c.clone(), self.render_key(k))))
    }
}

/// Result of contracting a leg with the counit.
#[derive(Debug, Clone, PartialEq)]
pub enum TensorOrElement {
    Scalar(ParamScalar),
    Element(UElement),
    Tensor(TensorElement),
}

impl GradedSeries for TensorElement {
    fn one_like(&self) -> Self {
        Self::one(&self.ctx, self.rank)
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
        let key: Vec<Monomial> = (0..self.rank).map(|_| self.ctx.unit_monomial()).collect();
        self.coefficient(&key)
    }
    fn describe(&self) -> String {
        let s = self.render();
        if s.len() > 200 {
            format!("{}…", &s[..s.char_indices().nth(200).map_or(s.len(), |(i, _)| i)])
        } else {
            s
        }
    }
}
