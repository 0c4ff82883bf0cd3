//! Exact convergence calculus on log-power exponent triples, and the
//! transforms mapping a tail asymptotic into each criterion.
//!
//! Everything here is exact rational arithmetic: a verdict never depends on
//! scale constants, only on the exponent triple, so multiplying a tail by any
//! positive constant cannot flip a classification.

use crate::rational::{rat, rat_string, Rat};
use crate::tailmodel::{DistributionSpec, LogPowerAsym};
use serde::Serialize;
use thiserror::Error;

/// Exponent triple of `1 / (t^a (ln t)^b (ln ln t)^c)` as integrand or
/// summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LogPowerExponents {
    #[serde(with = "rat_string")]
    pub t_exp: Rat,
    #[serde(with = "rat_string")]
    pub log_exp: Rat,
    #[serde(with = "rat_string")]
    pub loglog_exp: Rat,
}

impl LogPowerExponents {
    pub fn new(t_exp: Rat, log_exp: Rat, loglog_exp: Rat) -> Self {
        Self {
            t_exp,
            log_exp,
            loglog_exp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Convergence {
    Converges,
    Diverges,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Finiteness {
    Finite,
    Infinite,
}

/// Three-valued verdict for series conditions that may lack symbolic
/// information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeriesVerdict {
    Converges,
    Diverges,
    /// No usable asymptotic annotation; the caller falls back to numerics.
    Unknown,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BertrandError {
    #[error("qp-series rule consulted although E|X|^p = infinity (tail index {tail} < p = {p})")]
    MomentPrecondition { tail: String, p: String },
}

/// Bertrand test: `int^inf dt / (t^a (ln t)^b (lnln t)^c)` (equivalently the
/// series over `n`) converges iff `a > 1`, or `a = 1, b > 1`, or
/// `a = 1, b = 1, c > 1`.
pub fn converges(e: LogPowerExponents) -> Convergence {
    let one = rat(1, 1);
    let conv = e.t_exp > one
        || (e.t_exp == one && e.log_exp > one)
        || (e.t_exp == one && e.log_exp == one && e.loglog_exp > one);
    if conv {
        Convergence::Converges
    } else {
        Convergence::Diverges
    }
}

/// Exponents of the integrand `P^(q/p)(|X|^q > t)` for large `t`, given the
/// tail asymptotic `C t^-a (ln t)^-b (lnln t)^-c`.
///
/// Substituting `t^(1/q)` rescales the log factors by constants only, so the
/// triple is `(a/p, b q/p, c q/p)`; constants are dropped as irrelevant to
/// convergence.
pub fn integral_condition_exponents(asym: &LogPowerAsym, p: Rat, q: Rat) -> LogPowerExponents {
    let ratio = q / p;
    LogPowerExponents::new(
        asym.t_exp / p,
        asym.log_exp * ratio,
        asym.loglog_exp * ratio,
    )
}

/// Decides `E |X|^s ln^delta(1 + |X|) < infinity` from the tail asymptotic.
///
/// For a tail `~ C t^-a (ln t)^-b (lnln t)^-c`: finite iff `s < a`, or
/// `s = a` and the Bertrand triple `(1, b - delta, c)` converges; infinite
/// for `s > a`.
pub fn moment_finite(asym: &LogPowerAsym, s: Rat, delta: Rat) -> Finiteness {
    if s < asym.t_exp {
        Finiteness::Finite
    } else if s > asym.t_exp {
        Finiteness::Infinite
    } else {
        match converges(LogPowerExponents::new(
            rat(1, 1),
            asym.log_exp - delta,
            asym.loglog_exp,
        )) {
            Convergence::Converges => Finiteness::Finite,
            Convergence::Diverges => Finiteness::Infinite,
        }
    }
}

/// Derived rule for the `q = p` series
/// `sum_n (1/n) int_{min(u_n^p, n)}^{n} P(|X|^p > t) dt`.
///
/// Only consulted when `E|X|^p < infinity`. On `[u_n^p, n]` the integrand's
/// log factors are pinned at `ln n`, reducing the inner integral to
/// `~ (ln n)^-a (lnln n)^(1-b)` when the tail index equals `p`; the outer
/// series then converges iff `a > 1` or (`a = 1` and `b > 2`). A tail index
/// above `p` makes the inner integral polynomially small, hence convergence.
/// This reduction is a derived rule, not a stated criterion: callers must
/// label it as such and cross-check it against the numeric probe.
pub fn qp_series(asym: &LogPowerAsym, p: Rat) -> Result<Convergence, BertrandError> {
    if moment_finite(asym, p, rat(0, 1)) == Finiteness::Infinite {
        return Err(BertrandError::MomentPrecondition {
            tail: crate::rational::fmt_rat(asym.t_exp),
            p: crate::rational::fmt_rat(p),
        });
    }
    if asym.t_exp > p {
        return Ok(Convergence::Converges);
    }
    // tail index equals p here (smaller indices fail the precondition)
    let a = asym.log_exp;
    let b = asym.loglog_exp;
    if a > rat(1, 1) || (a == rat(1, 1) && b > rat(2, 1)) {
        Ok(Convergence::Converges)
    } else {
        Ok(Convergence::Diverges)
    }
}

/// Symbolic verdict for `sum_n |E X 1{|X| <= n}|^q / n`.
///
/// Symmetric laws contribute zero terms; laws annotated with a truncated-mean
/// asymptotic `(ln n)^-b (lnln n)^-c` reduce to the triple `(1, bq, cq)`;
/// anything else is `Unknown` and the caller probes numerically.
pub fn truncmean_series(spec: &DistributionSpec, q: Rat) -> SeriesVerdict {
    if spec.is_symmetric() {
        return SeriesVerdict::Converges;
    }
    match spec.trunc_mean_asym() {
        Some(tm) => match converges(LogPowerExponents::new(
            rat(1, 1),
            tm.log_exp * q,
            tm.loglog_exp * q,
        )) {
            Convergence::Converges => SeriesVerdict::Converges,
            Convergence::Diverges => SeriesVerdict::Diverges,
        },
        None => SeriesVerdict::Unknown,
    }
}
