//! The universal enveloping algebra in PBW normal form, its tensor powers,
//! and graded series.

mod element;
mod grading;
mod monomial;
mod series;
mod tensor;

use std::sync::Arc;

use parking_lot::RwLock;
use rustc_hash::FxHashMap;

pub use element::UElement;
pub use grading::GradingContext;
pub use monomial::Monomial;
pub use series::GradedSeries;
pub use tensor::{TensorElement, TensorKey, TensorOrElement};

use crate::lie::{LieAlgebraSpec, LieError};
use crate::scalar::ParamScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UeaError {
    #[error("operands live in different enveloping-algebra contexts")]
    ContextMismatch,
    #[error("series does not truncate: {0}")]
    NonTruncatable(String),
    #[error("leg {leg} out of range for rank {rank}")]
    LegOutOfRange { leg: usize, rank: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error(transparent)]
    Lie(#[from] LieError),
}

type Expansion = Arc<[(Monomial, ParamScalar)]>;

/// Shared context for arithmetic in `U(g)`: the algebra, the truncation and
/// the straightening caches. Caches sit behind read-write locks and may be
/// used from several threads.
pub struct Uea {
    spec: LieAlgebraSpec,
    grading: GradingContext,
    gen_cache: RwLock<FxHashMap<(Monomial, u16), Expansion>>,
    pair_cache: RwLock<FxHashMap<(Monomial, Monomial), Expansion>>,
    coproduct_cache: RwLock<FxHashMap<Monomial, Arc<[(Monomial, Monomial, ParamScalar)]>>>,
}

impl std::fmt::Debug for Uea {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Uea").field("algebra", &self.spec.name()).field("grading", &self.grading).finish()
    }
}

impl Uea {
    pub fn new(spec: LieAlgebraSpec, grading: GradingContext) -> Arc<Self> {
        Arc::new(Self {
            spec,
            grading,
            gen_cache: RwLock::new(FxHashMap::default()),
            pair_cache: RwLock::new(FxHashMap::default()),
            coproduct_cache: RwLock::new(FxHashMap::default()),
        })
    }

    pub fn spec(&self) -> &LieAlgebraSpec {
        &self.spec
    }

    pub fn grading(&self) -> &GradingContext {
        &self.grading
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub(crate) fn same(&self, other: &Uea) -> bool {
        std::ptr::eq(self, other) || (self.spec.id() == other.spec.id() && self.grading == other.grading)
    }

    pub fn unit_monomial(&self) -> Monomial {
        Monomial::unit(self.dim())
    }

    /// Normal-ordered expansion of `m · e_g`.
    pub fn mono_times_gen(&self, m: &Monomial, g: usize) -> Expansion {
        match m.last_index() {
            None => return Arc::from(vec![(m.with_delta(g, 1), ParamScalar::one())]),
            Some(x) if g >= x => return Arc::from(vec![(m.with_delta(g, 1), ParamScalar::one())]),
            _ => {}
        }
        let key = (m.clone(), g as u16);
        if let Some(hit) = self.gen_cache.read().get(&key) {
            return hit.clone();
        }
        let x = m.last_index().unwrap();
        let rest = m.with_delta(x, -1);
        // m·g = rest·x·g = (rest·g)·x + rest·[x, g]
        let mut acc: FxHashMap<Monomial, ParamScalar> = FxHashMap::default();
        for (t, c) in self.mono_times_gen(&rest, g).iter() {
            for (u, d) in self.mono_times_gen(t, x).iter() {
                accumulate(&mut acc, u.clone(), &(c * d));
            }
        }
        for (k, c) in self.spec.structure(x, g) {
            for (u, d) in self.mono_times_gen(&rest, *k).iter() {
                accumulate(&mut acc, u.clone(), &(c * d));
            }
        }
        let out: Expansion = sorted(acc).into();
        self.gen_cache.write().insert(key, out.clone());
        out
    }

    /// Normal-ordered expansion of the product of two PBW monomials.
    pub fn mono_mul(&self, a: &Monomial, b: &Monomial) -> Expansion {
        let ordered = match (a.last_index(), b.first_index()) {
            (None, _) | (_, None) => true,
            (Some(x), Some(y)) => x <= y,
        };
        if ordered {
            return Arc::from(vec![(a.concat(b), ParamScalar::one())]);
        }
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.pair_cache.read().get(&key) {
            return hit.clone();
        }
        let mut cur: FxHashMap<Monomial, ParamScalar> = FxHashMap::default();
        cur.insert(a.clone(), ParamScalar::one());
        for g in b.word() {
            let mut next: FxHashMap<Monomial, ParamScalar> = FxHashMap::default();
            for (m, c) in &cur {
                for (u, d) in self.mono_times_gen(m, g).iter() {
                    accumulate(&mut next, u.clone(), &(c * d));
                }
            }
            cur = next;
        }
        let out: Expansion = sorted(cur).into();
        self.pair_cache.write().insert(key, out.clone());
        out
    }

    /// `Δ⁰` of a PBW monomial: `Σ_j Π_i C(a_i, j_i) m_j ⊗ m_{a−j}`.
    pub fn coproduct0_monomial(&self, m: &Monomial) -> Arc<[(Monomial, Monomial, ParamScalar)]> {
        if let Some(hit) = self.coproduct_cache.read().get(m) {
            return hit.clone();
        }
        let exps = m.exponents();
        let mut out: Vec<(Vec<u8>, Vec<u8>, crate::scalar::Rational)> =
            vec![(Vec::new(), Vec::new(), crate::scalar::Rational::one())];
        for &a in exps {
            let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
            for (l, r, c) in &out {
                let mut binom = crate::scalar::Rational::one();
                for j in 0..=a {
                    if j > 0 {
                        binom = &(&binom * &crate::scalar::Rational::from_int((a - j + 1) as i64))
                            / &crate::scalar::Rational::from_int(j as i64);
                    }
                    let mut l2 = l.clone();
                    l2.push(j);
                    let mut r2 = r.clone();
                    r2.push(a - j);
                    next.push((l2, r2, c * &binom));
                }
            }
            out = next;
        }
        let res: Arc<[(Monomial, Monomial, ParamScalar)]> = out
            .into_iter()
            .map(|(l, r, c)| (Monomial::from_exponents(&l), Monomial::from_exponents(&r), ParamScalar::constant(c)))
            .collect::<Vec<_>>()
            .into();
        self.coproduct_cache.write().insert(m.clone(), res.clone());
        res
    }

    /// Number of cached straightening results (for diagnostics).
    pub fn cache_sizes(&self) -> (usize, usize) {
        (self.gen_cache.read().len(), self.pair_cache.read().len())
    }
}

pub(crate) fn accumulate<K: std::hash::Hash + Eq>(map: &mut FxHashMap<K, ParamScalar>, k: K, c: &ParamScalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            let v = e.get() + c;
            if v.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(c.clone());
        }
    }
}

fn sorted(map: FxHashMap<Monomial, ParamScalar>) -> Vec<(Monomial, ParamScalar)> {
    let mut v: Vec<_> = map.into_iter().collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<Uea> {
        Uea::new(LieAlgebraSpec::build_sl(3).unwrap(), GradingContext::default())
    }

    #[test]
    fn straightening_examples() {
        let u = ctx();
        let s = u.spec();
        let w = |l: &str| s.index_of(l).unwrap();
        let e = UElement::normal_order(&u, &[w("e12"), w("e21")]);
        assert_eq!(e.render(), "h13 + h_perp + e21*e12");
        let e = UElement::normal_order(&u, &[w("e23"), w("e12")]);
        assert_eq!(e.render(), "-e13 + e12*e23");
        let e = UElement::normal_order(&u, &[w("e13"), w("e13")]);
        assert_eq!(e.render(), "e13^2");
    }

    #[test]
    fn coproduct_of_product() {
        let u = ctx();
        let s = u.spec();
        let x = UElement::generator(&u, s.index_of("e12").unwrap());
        let y = UElement::generator(&u, s.index_of("e23").unwrap());
        let d = x.mul(&y).unwrap().coproduct0();
        let expect = x.coproduct0().mul(&y.coproduct0()).unwrap();
        assert_eq!(d, expect);
        assert_eq!(d.render(), "e12*e23 ⊗ 1 + e12 ⊗ e23 + e23 ⊗ e12 + 1 ⊗ e12*e23");
    }
}
