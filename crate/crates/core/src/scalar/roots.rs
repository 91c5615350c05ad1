use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::rational::{big_gcd, Rational};

fn eval(coeffs: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let Some(m) = n.to_u64() else {
        // Far outside anything the tables produce; treat as irreducible.
        return vec![BigInt::one(), n];
    };
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= m {
        if m % d == 0 {
            small.push(BigInt::from(d));
            if d != m / d {
                large.push(BigInt::from(m / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Distinct rational roots of `Σ coeffs[k] x^k`, sorted ascending.
///
/// Returns `None` for the zero polynomial, whose root set is everything.
pub fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut c: Vec<Rational> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.is_empty() {
        return None;
    }
    let mut roots = Vec::new();
    let shift = c.iter().take_while(|x| x.is_zero()).count();
    if shift > 0 {
        roots.push(Rational::zero());
        c.drain(..shift);
    }
    if c.len() > 1 {
        // Clear denominators to get integer coefficients.
        let mut lcm = BigInt::one();
        for x in &c {
            let d = x.denom();
            lcm = &lcm / big_gcd(&lcm, &d) * d;
        }
        let ints: Vec<BigInt> = c.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        let ps = divisors(&ints[0]);
        let qs = divisors(ints.last().unwrap());
        for p in &ps {
            for q in &qs {
                if !big_gcd(p, q).is_one() {
                    continue;
                }
                for sign in [1i32, -1] {
                    let cand = Rational::from(num_rational::BigRational::new(p * BigInt::from(sign), q.clone()));
                    if eval(&c, &cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

/// Rational values at which every polynomial in the family vanishes.
///
/// `None` means the whole family is identically zero.
pub fn common_rational_roots(family: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let nonzero: Vec<&Vec<Rational>> = family.iter().filter(|p| p.iter().any(|x| !x.is_zero())).collect();
    let first = nonzero.first()?;
    let candidates = rational_roots(first).unwrap_or_default();
    Some(candidates.into_iter().filter(|r| nonzero.iter().all(|p| eval(p, r).is_zero())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn finds_roots_of_cubic() {
        // γ³ − γ = γ(γ−1)(γ+1)
        let roots = rational_roots(&[q(0, 1), q(-1, 1), q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(roots, vec![q(-1, 1), q(0, 1), q(1, 1)]);
    }

    #[test]
    fn fractional_roots() {
        // (3γ − 1)(2γ + 1) = 6γ² + γ − 1
        let roots = rational_roots(&[q(-1, 1), q(1, 1), q(6, 1)]).unwrap();
        assert_eq!(roots, vec![q(-1, 2), q(1, 3)]);
    }

    #[test]
    fn common_roots() {
        let a = vec![q(-1, 1), q(1, 1)];
        let b = vec![q(-1, 1), q(0, 1), q(1, 1)];
        assert_eq!(common_rational_roots(&[a, b]).unwrap(), vec![q(1, 1)]);
        assert!(common_rational_roots(&[vec![q(0, 1)]]).is_none());
        assert_eq!(common_rational_roots(&[vec![q(2, 1)]]).unwrap(), vec![]);
    }
}
