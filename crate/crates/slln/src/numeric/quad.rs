//! Adaptive quadrature on finite intervals, plus a truncation rule for
//! integrands with an exponentially decaying envelope.
//!
//! The integrands this crate meets are tail integrals after the substitution
//! `x = e^u`: smooth, slowly varying factors times `e^(-rate * u)`. Adaptive
//! Simpson with a Richardson error estimate resolves those to near machine
//! precision in a few hundred evaluations.

use super::Scalar;

/// Maximum bisection depth of the adaptive subdivision.
const MAX_DEPTH: u32 = 52;

/// Adaptive Simpson integration of `f` over `[a, b]`.
///
/// Stops refining a panel once the local Richardson estimate is below the
/// panel's share of `rel_tol * |total| + abs_tol`. Returns the integral
/// estimate; accuracy degrades gracefully (never panics) if the depth cap is
/// reached.
pub fn adaptive<F: Scalar>(f: impl Fn(F) -> F, a: F, b: F, rel_tol: F, abs_tol: F) -> F {
    if a == b {
        return F::zero();
    }
    let fa = f(a);
    let fb = f(b);
    let m = (a + b) / F::of(2.0);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    // Two refinement passes: the first estimates the magnitude so that the
    // relative tolerance has something to be relative to.
    let scale = whole.abs().max(abs_tol);
    let tol = rel_tol * scale + abs_tol;
    recurse(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

fn simpson<F: Scalar>(a: F, b: F, fa: F, fm: F, fb: F) -> F {
    (b - a) / F::of(6.0) * (fa + F::of(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Scalar>(
    f: &impl Fn(F) -> F,
    a: F,
    b: F,
    fa: F,
    fm: F,
    fb: F,
    whole: F,
    tol: F,
    depth: u32,
) -> F {
    let m = (a + b) / F::of(2.0);
    let lm = (a + m) / F::of(2.0);
    let rm = (m + b) / F::of(2.0);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= F::of(15.0) * tol {
        // Richardson extrapolation of the two half-panel estimates.
        return left + right + delta / F::of(15.0);
    }
    let half_tol = tol / F::of(2.0);
    recurse(f, a, m, fa, flm, fm, left, half_tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, half_tol, depth - 1)
}

/// Integrates `f` over `[a, infinity)` for integrands bounded by
/// `c * e^(-rate * (u - a))` with a slowly varying `c`.
///
/// Truncates at `a + span` where `span = ln(1/rel_tol)/rate` plus margin, so
/// the discarded remainder is below `rel_tol` relative to the total, then
/// integrates the finite piece adaptively.
pub fn exp_tail<F: Scalar>(f: impl Fn(F) -> F, a: F, rate: F, rel_tol: F) -> F {
    debug_assert!(rate > F::zero(), "decay rate must be positive");
    let span = (rel_tol.ln().abs() + F::of(8.0)) / rate;
    adaptive(f, a, a + span, rel_tol, F::of(1e-300))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive(|x: f64| x * x, 0.0, 3.0, 1e-12, 0.0);
        assert!((v - 9.0).abs() < 1e-12);
    }

    #[test]
    fn smooth_transcendental() {
        let v = adaptive(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12, 0.0);
        assert!((v - 2.0).abs() < 1e-11, "got {v}");
    }

    #[test]
    fn exponential_tail() {
        // int_0^inf e^{-2u} du = 1/2
        let v = exp_tail(|u: f64| (-2.0 * u).exp(), 0.0, 2.0, 1e-12);
        assert!((v - 0.5).abs() < 1e-11, "got {v}");
    }

    #[test]
    fn log_power_tail_integral() {
        // int_1^inf e^{-u} u^{-2} du = Gamma(-1, 1) = 0.148495506775922...
        let v = exp_tail(|u: f64| (-u).exp() / (u * u), 1.0, 1.0, 1e-12);
        assert!((v - 0.148_495_506_775_922).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn works_in_f32() {
        let v = adaptive(|x: f32| x * x, 0.0_f32, 1.0, 1e-5, 0.0);
        assert!((v - 1.0 / 3.0).abs() < 1e-5);
    }
}
