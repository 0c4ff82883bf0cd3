//! Root bracketing for nonincreasing functions.
//!
//! Quantile inversion reduces to: given a nonincreasing `f` and a `target`,
//! find the smallest `x` with `f(x) < target`. Bracket by doubling, then
//! bisect keeping the invariant `f(lo) >= target > f(hi)`; the returned `hi`
//! endpoint therefore satisfies the strict inequality exactly, which is what
//! the infimum characterization of the quantile requires.

use super::Scalar;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("function never drops below the target within the bracket cap")]
    BracketExhausted,
    #[error("non-finite function value during bracketing")]
    NonFinite,
}

/// Smallest `x >= 0` with `f(x) < target`, for nonincreasing `f`.
///
/// Starts from the bracket `[0, 1]`, doubles the upper end until
/// `f(hi) < target` (capped near the scalar's maximum exponent), then bisects
/// to relative tolerance `rel_tol`. Returns the upper bisection endpoint.
pub fn first_below<F: Scalar>(
    f: impl Fn(F) -> F,
    target: F,
    rel_tol: F,
) -> Result<F, RootError> {
    let zero = F::zero();
    if !(f(zero) >= target) {
        // Already below target at the origin: the infimum is 0.
        return Ok(zero);
    }
    let mut hi = F::one();
    let cap = F::max_value() / F::of(4.0);
    let mut lo = zero;
    loop {
        let fh = f(hi);
        if fh.is_nan() {
            return Err(RootError::NonFinite);
        }
        if fh < target {
            break;
        }
        lo = hi;
        if hi >= cap {
            return Err(RootError::BracketExhausted);
        }
        hi = hi * F::of(2.0);
    }
    // Bisection: invariant f(lo) >= target, f(hi) < target.
    let two = F::of(2.0);
    for _ in 0..200 {
        if hi - lo <= rel_tol * hi.abs() + F::min_positive_value() {
            break;
        }
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi {
            break; // no representable midpoint left
        }
        if f(mid) < target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
