//! Distributions represented by their tail function `t -> P(|X| > t)`.
//!
//! A [`DistributionSpec`] couples the exact tail with the metadata the
//! criterion calculus consumes: a log-power asymptotic for the tail when one
//! exists, the sign structure, the declared mean, and (when known) the
//! asymptotic shape of the truncated mean. Specs are immutable after
//! construction and cheap to share across threads; sampling is the only
//! operation that touches mutable state, and that state is the caller's RNG.

mod builtins;
mod parse;
mod table;

pub use builtins::{ex4_1, ex4_2, ex4_3, logpower, pareto, rademacher, zero};
pub use parse::{parse_spec, ParseSpecError};

use crate::numeric::root::RootError;
use crate::rational::{rat_string, to_f64, Rat};
use crate::Real;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// `e^e`, the smallest abscissa where `ln ln t` is positive by a full unit.
pub fn e_pow_e() -> Real {
    std::f64::consts::E.exp()
}

#[derive(Debug, Error)]
pub enum TailModelError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("quantile inversion failed (malformed tail?): {0}")]
    Quantile(#[from] RootError),
    #[error("truncated mean undefined: E|X| is not declared finite for `{0}`")]
    MeanNotIntegrable(String),
}

/// Asymptotic tail form `g(t) = C t^-a (ln t)^-b (ln ln t)^-c`, valid for
/// `t >= valid_from`.
///
/// The scale is a float (convergence verdicts never depend on it); the three
/// exponents are exact rationals because the criterion tables branch on exact
/// equalities between them.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LogPowerAsym {
    pub scale: Real,
    #[serde(with = "rat_string")]
    pub t_exp: Rat,
    #[serde(with = "rat_string")]
    pub log_exp: Rat,
    #[serde(with = "rat_string")]
    pub loglog_exp: Rat,
    pub valid_from: Real,
}

impl LogPowerAsym {
    pub fn new(
        scale: Real,
        t_exp: Rat,
        log_exp: Rat,
        loglog_exp: Rat,
        valid_from: Real,
    ) -> Result<Self, TailModelError> {
        if !(scale > 0.0) {
            return Err(TailModelError::InvalidParameter {
                name: "scale",
                reason: format!("must be positive, got {scale}"),
            });
        }
        if valid_from < e_pow_e() - 1e-9 {
            return Err(TailModelError::InvalidParameter {
                name: "valid_from",
                reason: format!("must be >= e^e so that ln ln t > 0, got {valid_from}"),
            });
        }
        Ok(Self {
            scale,
            t_exp,
            log_exp,
            loglog_exp,
            valid_from,
        })
    }

    /// Evaluates the asymptotic form at `t` (meaningful for `t >= valid_from`).
    pub fn eval(&self, t: Real) -> Real {
        let lt = t.ln();
        let llt = lt.ln();
        self.scale
            * t.powf(-to_f64(self.t_exp))
            * lt.powf(-to_f64(self.log_exp))
            * llt.powf(-to_f64(self.loglog_exp))
    }
}

/// Sign structure of the law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SignModel {
    /// `X` and `-X` share a law; every truncated mean vanishes.
    Symmetric,
    /// A single negative atom balancing a positive continuous tail.
    AtomPlusPositiveTail { atom_location: Real, atom_mass: Real },
    /// Neither of the above (e.g. a shifted one-sided law); truncated means
    /// need closed forms or quadrature.
    Asymmetric,
}

/// Asymptotic truncated mean `E X 1{|X| <= n} ~ sign (ln n)^-b (ln ln n)^-c`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TruncMeanAsym {
    pub sign: i8,
    #[serde(with = "rat_string")]
    pub log_exp: Rat,
    #[serde(with = "rat_string")]
    pub loglog_exp: Rat,
}

/// A real-valued law described by its magnitude tail plus criterion metadata.
#[derive(Debug, Clone)]
pub struct DistributionSpec {
    pub(crate) name: String,
    pub(crate) kind: builtins::Kind,
    pub(crate) tail_asym: Option<LogPowerAsym>,
    pub(crate) sign_model: SignModel,
    pub(crate) declared_mean: Option<Real>,
    pub(crate) trunc_mean_asym: Option<TruncMeanAsym>,
    pub(crate) support_bound: Option<Real>,
}

impl DistributionSpec {
    /// Canonical `name:key=value` form, re-parseable by [`parse_spec`].
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tail_asym(&self) -> Option<&LogPowerAsym> {
        self.tail_asym.as_ref()
    }

    pub fn sign_model(&self) -> SignModel {
        self.sign_model
    }

    /// The analytic mean, when `E|X| < infinity` is part of the description.
    pub fn declared_mean(&self) -> Option<Real> {
        self.declared_mean
    }

    pub fn trunc_mean_asym(&self) -> Option<&TruncMeanAsym> {
        self.trunc_mean_asym.as_ref()
    }

    /// `b` such that `|X| <= b` almost surely, for bounded laws.
    pub fn support_bound(&self) -> Option<Real> {
        self.support_bound
    }

    pub fn is_symmetric(&self) -> bool {
        self.sign_model == SignModel::Symmetric
    }
}

/// Lazily extended cache of the quantiles `u_n = inf{t : P(|X| > t) < 1/n}`.
#[derive(Debug)]
pub struct QuantileSeq<'a> {
    spec: &'a DistributionSpec,
    values: BTreeMap<u64, Real>,
}

impl<'a> QuantileSeq<'a> {
    pub fn new(spec: &'a DistributionSpec) -> Self {
        Self {
            spec,
            values: BTreeMap::new(),
        }
    }

    pub fn get(&mut self, n: u64) -> Result<Real, TailModelError> {
        if let Some(&u) = self.values.get(&n) {
            return Ok(u);
        }
        let u = self.spec.quantile(n as Real)?;
        self.values.insert(n, u);
        Ok(u)
    }
}
