//! Decides membership in the (p,q)-type strong law of large numbers for
//! real-valued distributions, and cross-validates the verdicts empirically.
//!
//! A real random variable `X` with i.i.d. copies `X_1, X_2, ...` and partial
//! sums `S_n` belongs to `SLLN(p, q)` when
//!
//! ```text
//!     sum_n (1/n) * (|S_n| / n^(1/p))^q  <  infinity   almost surely,
//! ```
//!
//! with `0 < p < 2` and `q >= 1`. Membership is decidable from the tail
//! function `t -> P(|X| > t)` alone, through a small set of moment, integral,
//! and series conditions that depend on how `q` compares to `p`. For tails in
//! the log-power family `C t^-a (ln t)^-b (ln ln t)^-c` every one of those
//! conditions reduces to an exact Bertrand-series test on exponent triples,
//! so the verdict is symbolic; outside the family a numeric block-sum probe
//! takes over.
//!
//! Module map:
//!
//! - [`tailmodel`]: distributions given by their tail function, with exact
//!   quantiles, truncated means, inverse-transform sampling, and the built-in
//!   example laws.
//! - [`bertrand`]: the exact convergence calculus on exponent triples and the
//!   transforms from tail asymptotics into each criterion.
//! - [`criteria`]: the per-regime criterion tables, verdict reports, and the
//!   numeric series probes.
//! - [`montecarlo`]: reproducible simulation of the weighted series and
//!   sup-norm diagnostics.
//! - [`inequalities`]: weak-l_r norms and empirical validation of the
//!   maximal inequalities the theory rests on.

pub mod bertrand;
pub mod criteria;
pub mod inequalities;
pub mod montecarlo;
pub mod numeric;
pub mod rational;
pub mod tailmodel;

/// Floating scalar used by the concrete distribution layer and all reports.
///
/// The numerical kernels in [`numeric`] are generic over any
/// [`numeric::Scalar`]; the tolerances promised by the distribution layer
/// (1e-8 tail evaluation, 1e-12 quantile inversion) are only meaningful in
/// double precision, so the domain types pin this alias.
pub type Real = f64;

pub use rational::Rat;
