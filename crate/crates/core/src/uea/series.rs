use crate::scalar::{ParamScalar, Rational};

use super::UeaError;

/// Operations shared by `UElement` and `TensorElement` that the graded
/// exponential, logarithm and inverse need.
pub trait GradedSeries: Clone + Sized {
    fn one_like(&self) -> Self;
    fn is_zero_series(&self) -> bool;
    /// Minimum grade over all terms in half-units; `None` for zero.
    fn min_grade(&self) -> Option<i32>;
    fn mul_series(&self, other: &Self) -> Self;
    fn add_series(&self, other: &Self) -> Self;
    fn scale_series(&self, c: &Rational) -> Self;
    /// Coefficient of the unit (all legs `1`).
    fn unit_coefficient(&self) -> ParamScalar;
    fn describe(&self) -> String;

    fn sub_series(&self, other: &Self) -> Self {
        self.add_series(&other.scale_series(&Rational::from_int(-1)))
    }

    /// `exp(x) = Σ x^k / k!`; requires strictly positive grade.
    fn exp_graded(&self) -> Result<Self, UeaError> {
        if self.is_zero_series() {
            return Ok(self.one_like());
        }
        if self.min_grade().is_some_and(|g| g <= 0) {
            return Err(UeaError::NonTruncatable(format!("exp of zero-grade element {}", self.describe())));
        }
        let mut acc = self.one_like();
        let mut term = self.one_like();
        for k in 1.. {
            term = term.mul_series(self).scale_series(&Rational::new(1, k));
            if term.is_zero_series() {
                break;
            }
            acc = acc.add_series(&term);
        }
        Ok(acc)
    }

    /// `ln(1 + y) = Σ (−1)^{k+1} y^k / k`; requires `u = 1 + (positive grade)`.
    fn log_graded(&self) -> Result<Self, UeaError> {
        let y = self.positive_part("ln")?;
        let mut acc = y.scale_series(&Rational::zero());
        let mut pow = self.one_like();
        for k in 1i64.. {
            pow = pow.mul_series(&y);
            if pow.is_zero_series() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add_series(&pow.scale_series(&Rational::new(sign, k)));
        }
        Ok(acc)
    }

    /// `u^{-1} = Σ (−y)^k` for `u = 1 + y`.
    fn inverse_graded(&self) -> Result<Self, UeaError> {
        let y = self.positive_part("inverse")?.scale_series(&Rational::from_int(-1));
        let mut acc = self.one_like();
        let mut pow = self.one_like();
        loop {
            pow = pow.mul_series(&y);
            if pow.is_zero_series() {
                break;
            }
            acc = acc.add_series(&pow);
        }
        Ok(acc)
    }

    #[doc(hidden)]
    fn positive_part(&self, what: &str) -> Result<Self, UeaError> {
        if !self.unit_coefficient().constant_term().is_one() {
            return Err(UeaError::NonTruncatable(format!(
                "{what} needs 1 + (positive grade), got {}",
                self.describe()
            )));
        }
        let y = self.sub_series(&self.one_like());
        if y.min_grade().is_some_and(|g| g <= 0) {
            return Err(UeaError::NonTruncatable(format!("{what} of {} has zero-grade content", self.describe())));
        }
        Ok(y)
    }
}
