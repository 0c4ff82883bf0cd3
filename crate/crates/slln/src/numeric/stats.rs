//! Small order-statistics helpers for finite samples.

use super::Scalar;

/// Arithmetic mean; 0 for an empty slice.
pub fn mean<F: Scalar>(values: &[F]) -> F {
    if values.is_empty() {
        return F::zero();
    }
    let mut acc = super::sum::CompensatedSum::new();
    for &v in values {
        acc.add(v);
    }
    acc.value() / F::of(values.len() as f64)
}

/// Sample standard deviation (n-1 denominator); 0 for fewer than two values.
pub fn sample_sd<F: Scalar>(values: &[F]) -> F {
    if values.len() < 2 {
        return F::zero();
    }
    let m = mean(values);
    let mut acc = super::sum::CompensatedSum::new();
    for &v in values {
        let d = v - m;
        acc.add(d * d);
    }
    (acc.value() / F::of((values.len() - 1) as f64)).sqrt()
}

/// Linear-interpolated sample quantile (type 7) of finite values.
///
/// Sorts a copy; `level` is clamped to `[0, 1]`. Values must be orderable
/// (no NaN).
pub fn quantile<F: Scalar>(values: &[F], level: f64) -> F {
    assert!(!values.is_empty(), "quantile of an empty sample");
    let mut v = values.to_vec();
    v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("non-NaN sample"));
    let level = level.clamp(0.0, 1.0);
    let pos = level * (v.len() - 1) as f64;
    let idx = pos.floor() as usize;
    let frac = F::of(pos - idx as f64);
    if idx + 1 < v.len() {
        v[idx] + frac * (v[idx + 1] - v[idx])
    } else {
        v[idx]
    }
}

pub fn median<F: Scalar>(values: &[F]) -> F {
    quantile(values, 0.5)
}
