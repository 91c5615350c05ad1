use std::fmt::Write;

use smallvec::SmallVec;

/// A PBW monomial: exponents over the fixed ordered basis. The factor order
/// is implied by the basis order; the all-zero vector is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u8; 8]>);

impl Monomial {
    pub fn unit(dim: usize) -> Self {
        Monomial(SmallVec::from_elem(0, dim))
    }

    pub fn generator(dim: usize, i: usize) -> Self {
        let mut m = Self::unit(dim);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u8]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponent(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&x| x as u32).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Largest basis index with a nonzero exponent.
    pub fn last_index(&self) -> Option<usize> {
        self.0.iter().rposition(|&x| x != 0)
    }

    pub fn first_index(&self) -> Option<usize> {
        self.0.iter().position(|&x| x != 0)
    }

    pub(crate) fn with_delta(&self, i: usize, d: i8) -> Self {
        let mut m = self.clone();
        m.0[i] = (m.0[i] as i16 + d as i16).try_into().expect("PBW exponent out of range");
        m
    }

    /// Exponent-wise sum; the product when every index of `self` precedes
    /// every index of `other`.
    pub fn concat(&self, other: &Monomial) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// The generator word of the monomial, in PBW order.
    pub fn word(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.degree() as usize);
        for (i, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                w.push(i);
            }
        }
        w
    }

    pub fn render(&self, labels: &[String]) -> String {
        if self.is_unit() {
            return "1".into();
        }
        let mut s = String::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(&labels[i]);
            if e > 1 {
                let _ = write!(s, "^{e}");
            }
        }
        s
    }
}
