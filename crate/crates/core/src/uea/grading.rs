use serde::Serialize;

use crate::scalar::{Exponents, Param, Rational, NUM_PARAMS};

/// Per-parameter grade weights and the order cap.
///
/// Weights are stored in half-units so that grades such as `±1/2` stay
/// integral. A term is kept when its total grade does not exceed the cap.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GradingContext {
    half_weights: [i32; NUM_PARAMS],
    half_cap: i32,
}

impl GradingContext {
    /// Default weights: ξ, ζ, η carry grade 1; γ and ε are never truncated.
    pub fn new(order: u32) -> Self {
        let mut w = [0; NUM_PARAMS];
        for p in [Param::Xi, Param::Zeta, Param::Eta] {
            w[p.index()] = 2;
        }
        Self { half_weights: w, half_cap: 2 * order as i32 }
    }

    /// Set the grade of one parameter; it must be a multiple of 1/2.
    pub fn with_weight(mut self, p: Param, w: &Rational) -> Self {
        let twice = w * &Rational::from_int(2);
        assert!(twice.is_integer(), "grade weights must be multiples of 1/2");
        let v: i64 = twice.to_string().parse().expect("small integer grade");
        self.half_weights[p.index()] = v as i32;
        self
    }

    pub fn with_order(mut self, order: u32) -> Self {
        self.half_cap = 2 * order as i32;
        self
    }

    pub fn weight(&self, p: Param) -> Rational {
        Rational::new(self.half_weights[p.index()] as i64, 2)
    }

    pub fn order(&self) -> Rational {
        Rational::new(self.half_cap as i64, 2)
    }

    /// Total grade in half-units.
    pub fn grade_of(&self, e: &Exponents) -> i32 {
        e.iter().zip(&self.half_weights).map(|(&x, &w)| x as i32 * w).sum()
    }

    pub fn keeps(&self, e: &Exponents) -> bool {
        self.grade_of(e) <= self.half_cap
    }
}

impl Default for GradingContext {
    fn default() -> Self {
        Self::new(4)
    }
}
