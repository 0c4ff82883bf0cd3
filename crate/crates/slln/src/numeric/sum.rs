//! Compensated (Neumaier) summation.
//!
//! The weighted-series trajectories accumulate up to 2^16 terms spanning many
//! orders of magnitude; Neumaier's variant of Kahan summation keeps the
//! per-term rounding error near one ulp regardless of ordering.

use super::Scalar;

/// Running compensated sum.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<F> {
    sum: F,
    compensation: F,
}

impl<F: Scalar> Default for CompensatedSum<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Scalar> CompensatedSum<F> {
    pub fn new() -> Self {
        Self {
            sum: F::zero(),
            compensation: F::zero(),
        }
    }

    pub fn add(&mut self, x: F) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation = self.compensation + ((self.sum - t) + x);
        } else {
            self.compensation = self.compensation + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> F {
        self.sum + self.compensation
    }
}

/// Compensated sum of a slice, in slice order.
pub fn sum<F: Scalar>(values: &[F]) -> F {
    let mut acc = CompensatedSum::new();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}
