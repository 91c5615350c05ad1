//! Exact coefficient ring: rational polynomials in a fixed, ordered list of
//! formal parameters.

mod rational;
mod roots;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub use rational::{ParseRationalError, Rational};
pub use roots::{common_rational_roots, rational_roots};

use crate::uea::GradingContext;

/// Formal parameters, in their canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    /// Reshetikhin rotation of the Jordanian factor.
    Gamma,
    /// Deformation parameter of the twist.
    Xi,
    /// Deformation parameter surviving the classical limit.
    Zeta,
    /// Contraction parameter; the only one allowed negative exponents.
    #[serde(rename = "eps")]
    Epsilon,
    /// Grading parameter of the parabolic Jordanian factor.
    Eta,
}

pub const NUM_PARAMS: usize = 5;

pub type Exponents = [i16; NUM_PARAMS];

impl Param {
    pub const ALL: [Param; NUM_PARAMS] = [Param::Gamma, Param::Xi, Param::Zeta, Param::Epsilon, Param::Eta];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::Gamma => "gamma",
            Param::Xi => "xi",
            Param::Zeta => "zeta",
            Param::Epsilon => "eps",
            Param::Eta => "eta",
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        match s {
            "gamma" | "γ" => Some(Param::Gamma),
            "xi" | "ξ" => Some(Param::Xi),
            "zeta" | "ζ" => Some(Param::Zeta),
            "eps" | "epsilon" | "ε" => Some(Param::Epsilon),
            "eta" | "η" => Some(Param::Eta),
            _ => None,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A rational-coefficient polynomial in the parameters `(γ, ξ, ζ, ε, η)`.
///
/// Terms are kept sorted by exponent vector with no zero coefficients, so
/// structural equality is mathematical equality. Negative exponents are
/// representable only for `ε`, and only [`ParamScalar::epsilon_pow`] creates
/// them; ring operations never introduce poles on their own.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ParamScalar {
    terms: Vec<(Exponents, Rational)>,
}

const ZERO_EXPS: Exponents = [0; NUM_PARAMS];

fn add_exps(a: &Exponents, b: &Exponents) -> Exponents {
    let mut out = *a;
    for i in 0..NUM_PARAMS {
        out[i] += b[i];
    }
    out
}

impl ParamScalar {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(ZERO_EXPS, c)] }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(Rational::new(n, d))
    }

    /// The parameter itself.
    pub fn param(p: Param) -> Self {
        Self::param_pow(p, 1)
    }

    /// `p^k` for `k ≥ 0`.
    pub fn param_pow(p: Param, k: u16) -> Self {
        let mut e = ZERO_EXPS;
        e[p.index()] = k as i16;
        Self { terms: vec![(e, Rational::one())] }
    }

    /// `ε^k`, allowing negative `k`. This is the only way to build a Laurent
    /// scalar; it exists for the classical-limit scaling.
    pub fn epsilon_pow(k: i16) -> Self {
        let mut e = ZERO_EXPS;
        e[Param::Epsilon.index()] = k;
        Self { terms: vec![(e, Rational::one())] }
    }

    pub fn monomial(exps: Exponents, c: Rational) -> Self {
        for (i, &e) in exps.iter().enumerate() {
            assert!(e >= 0 || i == Param::Epsilon.index(), "negative exponent outside ε");
        }
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(exps, c)] }
        }
    }

    fn from_unsorted(mut raw: Vec<(Exponents, Rational)>) -> Self {
        if raw.len() > 1 {
            raw.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            let mut out: Vec<(Exponents, Rational)> = Vec::with_capacity(raw.len());
            for (e, c) in raw {
                match out.last_mut() {
                    Some(last) if last.0 == e => last.1 = &last.1 + &c,
                    _ => out.push((e, c)),
                }
            }
            out.retain(|(_, c)| !c.is_zero());
            Self { terms: out }
        } else {
            raw.retain(|(_, c)| !c.is_zero());
            Self { terms: raw }
        }
    }

    pub fn terms(&self) -> &[(Exponents, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == ZERO_EXPS && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| *e == ZERO_EXPS)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(e, c)] if *e == ZERO_EXPS => Some(c.clone()),
            _ => None,
        }
    }

    /// Coefficient of the given exponent vector.
    pub fn coefficient(&self, exps: &Exponents) -> Rational {
        match self.terms.binary_search_by(|t| t.0.cmp(exps)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&ZERO_EXPS)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// Multiply by `p^k` (negative `k` only for ε).
    pub fn shift(&self, p: Param, k: i16) -> Self {
        let i = p.index();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = *e;
                e[i] += k;
                assert!(e[i] >= 0 || p == Param::Epsilon, "negative exponent outside ε");
                (e, c.clone())
            })
            .collect();
        Self { terms }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn min_exponent(&self, p: Param) -> Option<i16> {
        self.terms.iter().map(|(e, _)| e[p.index()]).min()
    }

    pub fn max_exponent(&self, p: Param) -> Option<i16> {
        self.terms.iter().map(|(e, _)| e[p.index()]).max()
    }

    pub fn involves(&self, p: Param) -> bool {
        self.terms.iter().any(|(e, _)| e[p.index()] != 0)
    }

    pub fn has_poles(&self) -> bool {
        self.terms.iter().any(|(e, _)| e.iter().any(|&x| x < 0))
    }

    /// Decomposition `Σ_k p^k · c_k`, with `p` removed from each `c_k`.
    pub fn split_by(&self, p: Param) -> BTreeMap<i16, ParamScalar> {
        let i = p.index();
        let mut raw: BTreeMap<i16, Vec<(Exponents, Rational)>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[i] = 0;
            raw.entry(e[i]).or_default().push((e2, c.clone()));
        }
        raw.into_iter().map(|(k, v)| (k, Self::from_unsorted(v))).collect()
    }

    /// Terms whose exponent of `p` equals `k` (exponent kept).
    pub fn part_with_exponent(&self, p: Param, k: i16) -> Self {
        Self { terms: self.terms.iter().filter(|(e, _)| e[p.index()] == k).cloned().collect() }
    }

    /// Substitute a scalar for a parameter that appears with non-negative exponents.
    pub fn substitute(&self, p: Param, value: &ParamScalar) -> Self {
        let i = p.index();
        if !self.involves(p) {
            return self.clone();
        }
        let max = self.max_exponent(p).unwrap_or(0).max(0) as u32;
        let mut powers = Vec::with_capacity(max as usize + 1);
        powers.push(Self::one());
        for k in 1..=max {
            let next = &powers[k as usize - 1] * value;
            powers.push(next);
        }
        let mut acc = Self::zero();
        for (e, c) in &self.terms {
            assert!(e[i] >= 0, "cannot substitute into a Laurent exponent");
            let mut e2 = *e;
            e2[i] = 0;
            let base = Self { terms: vec![(e2, c.clone())] };
            acc += &(&base * &powers[e[i] as usize]);
        }
        acc
    }

    pub fn eval_at(&self, p: Param, r: &Rational) -> Self {
        self.substitute(p, &Self::constant(r.clone()))
    }

    /// Exact division by `p^k`; `None` if some term has a smaller exponent.
    pub fn div_param_pow(&self, p: Param, k: i16) -> Option<Self> {
        let i = p.index();
        if self.terms.iter().any(|(e, _)| e[i] < k && p != Param::Epsilon) {
            return None;
        }
        Some(self.shift_unchecked(i, -k))
    }

    fn shift_unchecked(&self, i: usize, k: i16) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    e[i] += k;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Minimum grade of any term under the context's parameter weights
    /// (in half-units); `None` for zero.
    pub fn min_grade(&self, ctx: &GradingContext) -> Option<i32> {
        self.terms.iter().map(|(e, _)| ctx.grade_of(e)).min()
    }

    /// Drop every term above the grade cap. The flag reports whether
    /// anything was dropped.
    pub fn truncate(&self, ctx: &GradingContext) -> (Self, bool) {
        if self.terms.iter().all(|(e, _)| ctx.keeps(e)) {
            return (self.clone(), false);
        }
        let terms = self.terms.iter().filter(|(e, _)| ctx.keeps(e)).cloned().collect();
        (Self { terms }, true)
    }

    /// Product with terms above the cap skipped before they are formed.
    pub fn mul_truncated(&self, other: &Self, ctx: &GradingContext) -> (Self, bool) {
        let mut dropped = false;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = add_exps(ea, eb);
                if ctx.keeps(&e) {
                    raw.push((e, ca * cb));
                } else {
                    dropped = true;
                }
            }
        }
        (Self::from_unsorted(raw), dropped)
    }

    /// Keep only terms satisfying a predicate on the exponent vector.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Exponents) -> bool) -> Self {
        Self { terms: self.terms.iter().filter(|(e, _)| keep(e)).cloned().collect() }
    }

    /// If the scalar involves at most the single parameter `p`, its
    /// coefficients indexed by degree.
    pub fn univariate_coefficients(&self, p: Param) -> Option<Vec<Rational>> {
        let i = p.index();
        let mut out: Vec<Rational> = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &x)| j != i && x != 0) || e[i] < 0 {
                return None;
            }
            let d = e[i] as usize;
            if out.len() <= d {
                out.resize(d + 1, Rational::zero());
            }
            out[d] = c.clone();
        }
        Some(out)
    }
}

impl<'a> Add<&'a ParamScalar> for &'a ParamScalar {
    type Output = ParamScalar;
    fn add(self, rhs: &ParamScalar) -> ParamScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.terms, &rhs.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        ParamScalar { terms: out }
    }
}

impl<'a> Sub<&'a ParamScalar> for &'a ParamScalar {
    type Output = ParamScalar;
    fn sub(self, rhs: &ParamScalar) -> ParamScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ParamScalar> for &'a ParamScalar {
    type Output = ParamScalar;
    fn mul(self, rhs: &ParamScalar) -> ParamScalar {
        if self.is_zero() || rhs.is_zero() {
            return ParamScalar::zero();
        }
        if let [(e, c)] = self.terms.as_slice() {
            if *e == ZERO_EXPS {
                return rhs.scale(c);
            }
        }
        if let [(e, c)] = rhs.terms.as_slice() {
            if *e == ZERO_EXPS {
                return self.scale(c);
            }
        }
        let mut raw = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                raw.push((add_exps(ea, eb), ca * cb));
            }
        }
        ParamScalar::from_unsorted(raw)
    }
}

impl Neg for &ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        -&self
    }
}

impl AddAssign<&ParamScalar> for ParamScalar {
    fn add_assign(&mut self, rhs: &ParamScalar) {
        if rhs.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = rhs.clone();
            return;
        }
        *self = &*self + rhs;
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<ParamScalar> for ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: ParamScalar) -> ParamScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ParamScalar> for ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: &ParamScalar) -> ParamScalar {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl From<Rational> for ParamScalar {
    fn from(r: Rational) -> Self {
        ParamScalar::constant(r)
    }
}

impl From<i64> for ParamScalar {
    fn from(n: i64) -> Self {
        ParamScalar::from_int(n)
    }
}

impl From<Param> for ParamScalar {
    fn from(p: Param) -> Self {
        ParamScalar::param(p)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &Exponents) -> fmt::Result {
    let mut first = true;
    for p in Param::ALL {
        let k = e[p.index()];
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if k == 1 {
            write!(f, "{}", p.name())?;
        } else {
            write!(f, "{}^{}", p.name(), k)?;
        }
    }
    Ok(())
}

impl fmt::Display for ParamScalar {
    /// Canonical text: terms in storage order, e.g. `-1/2 + 3/2*gamma`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if *e == ZERO_EXPS {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write_monomial(f, e)?;
            } else {
                write!(f, "{mag}*")?;
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamScalar({self})")
    }
}

impl Serialize for ParamScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> ParamScalar {
        ParamScalar::param(Param::Gamma)
    }

    #[test]
    fn exact_cancellation() {
        let a = &(&g() * &g()) + &ParamScalar::ratio(1, 3);
        assert!((&a - &a).is_zero());
        assert!((&a + &(-&a)).terms().is_empty());
    }

    #[test]
    fn display_is_canonical() {
        let c = &g().scale(&Rational::new(3, 2)) - &ParamScalar::ratio(1, 2);
        assert_eq!(c.to_string(), "-1/2 + 3/2*gamma");
        assert_eq!(ParamScalar::zero().to_string(), "0");
    }

    #[test]
    fn substitution_and_split() {
        let x = ParamScalar::param(Param::Xi);
        let p = &(&x * &x) + &(&g() * &x);
        let eps = ParamScalar::param(Param::Epsilon);
        let zeta = ParamScalar::param(Param::Zeta);
        let sub = p.substitute(Param::Xi, &(&eps * &zeta));
        let parts = sub.split_by(Param::Epsilon);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&2], &zeta * &zeta);
    }

    #[test]
    fn laurent_only_through_epsilon() {
        let inv = ParamScalar::epsilon_pow(-1);
        let e = ParamScalar::param(Param::Epsilon);
        assert!((&inv * &e).is_one());
        assert!(inv.has_poles());
    }

    #[test]
    #[should_panic]
    fn negative_exponent_rejected_outside_epsilon() {
        let _ = ParamScalar::param(Param::Xi).shift(Param::Xi, -2);
    }
}
