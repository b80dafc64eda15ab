use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Unit roundoff for `f64`.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// A complex value with a bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueWithError {
    pub value: Complex64,
    pub error_bound: f64,
}

impl ValueWithError {
    pub fn new(value: Complex64, error_bound: f64) -> Self {
        debug_assert!(error_bound >= 0.0 && error_bound.is_finite());
        Self { value, error_bound }
    }

    pub fn exact(value: Complex64) -> Self {
        Self::new(value, 0.0)
    }

    /// `true` when the magnitude exceeds the error bound, i.e. the value is
    /// certifiably nonzero.
    pub fn is_certainly_nonzero(&self) -> bool {
        self.value.norm() > self.error_bound
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.value * factor, self.error_bound * factor.norm())
    }

    /// Difference with additively combined bounds plus the rounding of the
    /// subtraction itself.
    pub fn sub(&self, other: &Self) -> Self {
        let value = self.value - other.value;
        let rounding = UNIT_ROUNDOFF * (self.value.norm() + other.value.norm());
        Self::new(value, self.error_bound + other.error_bound + rounding)
    }

    pub fn add(&self, other: &Self) -> Self {
        let value = self.value + other.value;
        let rounding = UNIT_ROUNDOFF * (self.value.norm() + other.value.norm());
        Self::new(value, self.error_bound + other.error_bound + rounding)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let value = self.value * other.value;
        let (a, b) = (self.value.norm(), other.value.norm());
        let (da, db) = (self.error_bound, other.error_bound);
        Self::new(value, a * db + b * da + da * db + 2.0 * UNIT_ROUNDOFF * value.norm())
    }
}
