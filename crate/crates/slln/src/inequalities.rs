//! Weak-l_r norms and empirical checks of the maximal inequalities.
//!
//! Two families of checks, both theorems (so any observed violation is an
//! implementation bug, never statistics):
//!
//! - the weak-norm tail bound: for i.i.d. `V_1..V_n` and `s >= 1`,
//!   `P(||(V_k)||_{s,inf} > u) <= (2e/u^s) sup_t t^s sum_k P(|V_k| > t)`;
//! - the series comparison for symmetric laws: with `a_n` summable,
//!   `b_n = sum_{k>=n} a_k`, `G = sup_n b_n |V_n|^q`, and
//!   `H = sum_n a_n |S_n|^q`, both `P(G > t) <= 2 P(H > t/alpha)` and
//!   `E G <= 2 alpha E H`, where `alpha = 2^(1-q)` for `q <= 1` and 1 above.
//!
//! Both sides of every bound are estimated on the same trials; the
//! probability/expectation comparisons carry a 3-standard-error slack since
//! they are sampled, while the weak-norm bound needs none (its `2e` constant
//! dwarfs Monte Carlo noise).

use crate::montecarlo::child_seed;
use crate::numeric::stats::{mean, quantile, sample_sd};
use crate::numeric::sum::CompensatedSum;
use crate::rational::{rat, rat_string, to_f64, Rat};
use crate::tailmodel::DistributionSpec;
use crate::Real;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InequalityError {
    #[error("majorant sup_t t^s n P(|X| > t) is infinite: s exceeds the tail index")]
    InfiniteMajorant,
    #[error("the series inequality requires a symmetric law; `{0}` is not symmetric")]
    RequiresSymmetric(String),
    #[error("invalid parameter: {0}")]
    Invalid(String),
}

/// Weak-l_s norm `sup_k k^(1/s) a*_k` over the nonincreasing rearrangement
/// `a*` of the absolute values. Empty input gives 0 by convention; `order`
/// is meaningful for `s >= 1`.
pub fn weak_norm(values: &[Real], order: Real) -> Real {
    debug_assert!(order >= 1.0, "weak norm is defined for order >= 1");
    let mut a: Vec<Real> = values.iter().map(|v| v.abs()).collect();
    a.sort_unstable_by(|x, y| y.partial_cmp(x).expect("non-NaN values"));
    a.iter()
        .enumerate()
        .map(|(k, &v)| ((k + 1) as Real).powf(1.0 / order) * v)
        .fold(0.0, Real::max)
}

/// One grid point of an empirical bound comparison.
#[derive(Debug, Clone, Serialize)]
pub struct BoundPoint {
    /// Threshold `u` (weak-norm check) or `t` (series check).
    pub level: Real,
    pub lhs: Real,
    pub rhs: Real,
    /// Monte Carlo slack granted before counting a violation.
    pub slack: Real,
    pub violated: bool,
}

/// Outcome of one empirical inequality battery.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCheckResult {
    pub check: String,
    pub spec: String,
    #[serde(with = "rat_string")]
    pub order: Rat,
    /// Sequence length (`n` draws per trial, or series truncation `N`).
    pub n: u64,
    pub trials: u32,
    pub seed: u64,
    pub violations: u32,
    /// Largest observed `lhs/rhs` over grid points with positive `rhs`.
    pub max_ratio: Real,
    pub points: Vec<BoundPoint>,
    pub notes: Vec<String>,
}

/// 16 log-spaced levels between the empirical 10% and 99.9% quantiles,
/// widened when the statistic is (near-)degenerate.
fn level_grid(samples: &[Real]) -> Vec<Real> {
    let lo = quantile(samples, 0.10).max(1e-300);
    let hi = quantile(samples, 0.999).max(lo);
    let (lo, hi) = if hi <= lo * (1.0 + 1e-9) {
        (lo * 0.5, hi * 2.0)
    } else {
        (lo, hi)
    };
    let k = 16;
    (0..k)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as Real / (k - 1) as Real).exp())
        .collect()
}

/// Checks the weak-norm tail bound on `trials` simulated blocks of `n`
/// i.i.d. draws.
///
/// The majorant `sup_t t^s n P(|X| > t)` is closed-form for pure power and
/// bounded tails and a 10^4-point log-grid supremum otherwise; an infinite
/// majorant (s above the tail index) is reported as an error, not a crash.
pub fn marcus_pisier_check(
    spec: &DistributionSpec,
    n: u64,
    s: Rat,
    u_grid: Option<&[Real]>,
    trials: u32,
    seed: u64,
) -> Result<BoundCheckResult, InequalityError> {
    if s < rat(1, 1) {
        return Err(InequalityError::Invalid(format!(
            "weak-norm order must be >= 1, got {}",
            crate::rational::fmt_rat(s)
        )));
    }
    if trials == 0 || n == 0 {
        return Err(InequalityError::Invalid(
            "need trials >= 1 and n >= 1".to_string(),
        ));
    }
    let sf = to_f64(s);
    let majorant = n as Real
        * spec
            .tail_power_sup(s)
            .ok_or(InequalityError::InfiniteMajorant)?;
    let norms: Vec<Real> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(child_seed(seed, trial));
            let draws = spec.sample(&mut rng, n as usize);
            weak_norm(&draws, sf)
        })
        .collect();
    let grid: Vec<Real> = match u_grid {
        Some(g) => g.to_vec(),
        None => level_grid(&norms),
    };
    let two_e = 2.0 * std::f64::consts::E;
    let mut points = Vec::with_capacity(grid.len());
    let mut violations = 0;
    let mut max_ratio: Real = 0.0;
    for &u in &grid {
        let lhs = norms.iter().filter(|&&w| w > u).count() as Real / trials as Real;
        let rhs = two_e * majorant / u.powf(sf);
        let violated = lhs > rhs;
        if violated {
            violations += 1;
        }
        if rhs > 0.0 {
            max_ratio = max_ratio.max(lhs / rhs);
        }
        points.push(BoundPoint {
            level: u,
            lhs,
            rhs,
            slack: 0.0,
            violated,
        });
    }
    Ok(BoundCheckResult {
        check: "marcus_pisier".to_string(),
        spec: spec.name().to_string(),
        order: s,
        n,
        trials,
        seed,
        violations,
        max_ratio,
        points,
        notes: vec![format!("majorant sup_t t^s n P(|X|>t) = {majorant}")],
    })
}

/// The `(alpha, beta)` constants of the series comparison.
fn hj_constants(q: Rat) -> (Real, Real) {
    let qf = to_f64(q);
    if q <= rat(1, 1) {
        ((1.0 - qf).exp2(), 1.0)
    } else {
        (1.0, (qf - 1.0).exp2())
    }
}

fn simulate_sup_and_series(
    spec: &DistributionSpec,
    q: Real,
    n_trunc: u64,
    trials: u32,
    seed: u64,
) -> (Vec<Real>, Vec<Real>) {
    // a_n = 1/n^2 truncated at N; b_n = sum_{k=n}^N a_k exactly (backward)
    let a: Vec<Real> = (1..=n_trunc).map(|n| 1.0 / (n as Real * n as Real)).collect();
    let mut b = vec![0.0; a.len()];
    let mut acc = CompensatedSum::new();
    for i in (0..a.len()).rev() {
        acc.add(a[i]);
        b[i] = acc.value();
    }
    let pairs: Vec<(Real, Real)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(child_seed(seed, trial));
            let mut s = 0.0_f64;
            let mut g: Real = 0.0;
            let mut h = CompensatedSum::new();
            for i in 0..n_trunc as usize {
                let v = spec.draw(&mut rng);
                s += v;
                g = g.max(b[i] * v.abs().powf(q));
                h.add(a[i] * s.abs().powf(q));
            }
            (g, h.value())
        })
        .collect();
    pairs.into_iter().unzip()
}

/// Empirically verifies the probability and expectation comparisons between
/// `sup_n b_n |V_n|^q` and `sum_n a_n |S_n|^q` for a symmetric law, with
/// `a_n = 1/n^2` truncated at `n_trunc`.
///
/// Truncation only shrinks the sup side, so the check stays one-sidedly
/// sound. Violations are counted beyond a 3-standard-error slack estimated
/// from the same trials.
pub fn hj_series_check(
    spec: &DistributionSpec,
    q: Rat,
    n_trunc: u64,
    trials: u32,
    seed: u64,
) -> Result<BoundCheckResult, InequalityError> {
    if !spec.is_symmetric() {
        return Err(InequalityError::RequiresSymmetric(spec.name().to_string()));
    }
    if trials < 2 || n_trunc == 0 {
        return Err(InequalityError::Invalid(
            "need trials >= 2 and a positive truncation".to_string(),
        ));
    }
    let qf = to_f64(q);
    let (alpha, _beta) = hj_constants(q);
    let (g, h) = simulate_sup_and_series(spec, qf, n_trunc, trials, seed);
    let grid = level_grid(&g);
    let mut points = Vec::new();
    let mut violations = 0;
    let mut max_ratio: Real = 0.0;
    let tf = trials as Real;
    for &t in &grid {
        let ind: Vec<Real> = g
            .iter()
            .zip(&h)
            .map(|(&gi, &hi)| {
                Real::from(u8::from(gi > t)) - 2.0 * Real::from(u8::from(hi > t / alpha))
            })
            .collect();
        let lhs = g.iter().filter(|&&gi| gi > t).count() as Real / tf;
        let rhs = 2.0 * h.iter().filter(|&&hi| hi > t / alpha).count() as Real / tf;
        let slack = 3.0 * sample_sd(&ind) / tf.sqrt();
        let violated = lhs > rhs + slack;
        if violated {
            violations += 1;
        }
        if rhs > 0.0 {
            max_ratio = max_ratio.max(lhs / rhs);
        }
        points.push(BoundPoint {
            level: t,
            lhs,
            rhs,
            slack,
            violated,
        });
    }
    // expectation comparison on the same trials
    let diff: Vec<Real> = g
        .iter()
        .zip(&h)
        .map(|(&gi, &hi)| gi - 2.0 * alpha * hi)
        .collect();
    let e_lhs = mean(&g);
    let e_rhs = 2.0 * alpha * mean(&h);
    let e_slack = 3.0 * sample_sd(&diff) / tf.sqrt();
    let e_violated = e_lhs > e_rhs + e_slack;
    if e_violated {
        violations += 1;
    }
    if e_rhs > 0.0 {
        max_ratio = max_ratio.max(e_lhs / e_rhs);
    }
    points.push(BoundPoint {
        level: Real::INFINITY, // marks the expectation row
        lhs: e_lhs,
        rhs: e_rhs,
        slack: e_slack,
        violated: e_violated,
    });
    Ok(BoundCheckResult {
        check: "hj_series".to_string(),
        spec: spec.name().to_string(),
        order: q,
        n: n_trunc,
        trials,
        seed,
        violations,
        max_ratio,
        points,
        notes: vec![format!("alpha = {alpha}")],
    })
}

/// Single smoke configuration of the three-threshold probability display and
/// the `t_0` quantity.
///
/// Checks, at `s = t = u = median(H)`, that
/// `P(H > s+t+u) <= P(G > s/beta^2) + 4 P(H > u/(alpha beta)) P(H > t/(alpha
/// beta^2))` within 3 SE, and that the level `t_0 = inf{t : P(H > t) <=
/// (24 (alpha+beta)^3)^-1}` is attained at a finite threshold on the sampled
/// trials. The full `(s, t, u)` space is deliberately not swept.
pub fn hj_three_term_smoke(
    spec: &DistributionSpec,
    q: Rat,
    n_trunc: u64,
    trials: u32,
    seed: u64,
) -> Result<BoundCheckResult, InequalityError> {
    if !spec.is_symmetric() {
        return Err(InequalityError::RequiresSymmetric(spec.name().to_string()));
    }
    let qf = to_f64(q);
    let (alpha, beta) = hj_constants(q);
    let (g, h) = simulate_sup_and_series(spec, qf, n_trunc, trials, seed);
    let tf = trials as Real;
    let m = quantile(&h, 0.5);
    let (s, t, u) = (m, m, m);
    let freq = |xs: &[Real], lvl: Real| xs.iter().filter(|&&x| x > lvl).count() as Real / tf;
    let lhs = freq(&h, s + t + u);
    let rhs = freq(&g, s / (beta * beta))
        + 4.0 * freq(&h, u / (alpha * beta)) * freq(&h, t / (alpha * beta * beta));
    let slack = 3.0 * (lhs * (1.0 - lhs) / tf).sqrt() + 1e-12;
    let violated = lhs > rhs + slack;
    // t_0 well-definedness: the defining set must be nonempty on the sample
    let level = 1.0 / (24.0 * (alpha + beta).powi(3));
    let t0 = quantile(&h, 1.0 - level.min(1.0));
    let t0_ok = t0.is_finite();
    Ok(BoundCheckResult {
        check: "hj_three_term_smoke".to_string(),
        spec: spec.name().to_string(),
        order: q,
        n: n_trunc,
        trials,
        seed,
        violations: u32::from(violated) + u32::from(!t0_ok),
        max_ratio: if rhs > 0.0 { lhs / rhs } else { 0.0 },
        points: vec![BoundPoint {
            level: s + t + u,
            lhs,
            rhs,
            slack,
            violated,
        }],
        notes: vec![format!("t0 estimate = {t0} at exceedance level {level}")],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tailmodel::{pareto, rademacher, zero};

    #[test]
    fn weak_norm_hand_computed() {
        // a = (3, 1, 2), s = 2: rearranged (3, 2, 1), sup of
        // (1*3, sqrt(2)*2, sqrt(3)*1) = 3
        let v = weak_norm(&[3.0, 1.0, 2.0], 2.0);
        assert!((v - 3.0).abs() < 1e-15);
        // constant sequence: c * n^(1/s)
        let v = weak_norm(&[2.0; 9], 2.0);
        assert!((v - 6.0).abs() < 1e-12);
        assert_eq!(weak_norm(&[], 2.0), 0.0);
    }

    #[test]
    fn weak_norm_sign_and_order_invariances() {
        let a = [0.3, -2.0, 1.4, 0.0, -0.7];
        let b = [2.0, 0.7, 0.3, 1.4, 0.0];
        assert_eq!(weak_norm(&a, 1.5), weak_norm(&b, 1.5));
        // s1 <= s2 implies k^(1/s1) >= k^(1/s2), so the norm shrinks in s
        assert!(weak_norm(&a, 1.0) >= weak_norm(&a, 2.0));
        assert!(weak_norm(&a, 2.0) >= weak_norm(&a, 4.0));
    }

    #[test]
    fn marcus_pisier_pareto_closed_form_majorant() {
        let spec = pareto(rat(5, 2), false).unwrap();
        let res = marcus_pisier_check(&spec, 64, rat(5, 2), None, 2000, 9).unwrap();
        assert_eq!(res.violations, 0, "{res:?}");
        assert!(res.max_ratio < 1.0);
        // closed form: majorant = n * 1
        assert!(res.notes[0].contains("= 64"));
    }

    #[test]
    fn marcus_pisier_rejects_infinite_majorant() {
        let spec = pareto(rat(3, 2), false).unwrap();
        let err = marcus_pisier_check(&spec, 16, rat(2, 1), None, 100, 1).unwrap_err();
        assert!(matches!(err, InequalityError::InfiniteMajorant));
    }

    #[test]
    fn marcus_pisier_vanishes_in_the_far_tail() {
        // at a level where rhs < 1e-6 / trials, the empirical lhs must be 0
        let spec = pareto(rat(5, 2), false).unwrap();
        let trials = 1000;
        let huge = {
            // rhs = 2e * 64 / u^2.5 < 1e-6/trials
            (2.0 * std::f64::consts::E * 64.0 * (trials as Real) / 1e-6).powf(1.0 / 2.5)
        };
        let res =
            marcus_pisier_check(&spec, 64, rat(5, 2), Some(&[huge]), trials, 3).unwrap();
        assert_eq!(res.points[0].lhs, 0.0);
        assert_eq!(res.violations, 0);
    }

    #[test]
    fn hj_series_rademacher_holds() {
        let res = hj_series_check(&rademacher(), rat(2, 1), 256, 1500, 4).unwrap();
        assert_eq!(res.violations, 0, "{:?}", res.points);
    }

    #[test]
    fn hj_series_zero_is_trivial() {
        let res = hj_series_check(&zero(), rat(1, 1), 64, 100, 4).unwrap();
        assert_eq!(res.violations, 0);
    }

    #[test]
    fn hj_series_rejects_asymmetric_specs() {
        let spec = pareto(rat(5, 2), true).unwrap();
        let err = hj_series_check(&spec, rat(1, 1), 64, 100, 4).unwrap_err();
        assert!(matches!(err, InequalityError::RequiresSymmetric(_)));
    }

    #[test]
    fn hj_smoke_configuration_runs_clean() {
        let res = hj_three_term_smoke(&rademacher(), rat(2, 1), 256, 1500, 8).unwrap();
        assert_eq!(res.violations, 0, "{res:?}");
    }
}
