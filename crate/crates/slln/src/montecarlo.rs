//! Reproducible simulation of the weighted partial-sum series.
//!
//! Per replication the simulator streams `S_n = X_1 + ... + X_n` and
//! accumulates `T_N = sum_{n<=N} (1/n)(|S_n|/n^(1/p))^q` with compensated
//! summation, recording `T` and the block sup `M_N = max_{N/2 < n <= N}
//! |S_n|/n^(1/p)` at dyadic checkpoints. Replications are independent, each
//! owns a ChaCha8 stream seeded by a fixed 64-bit mix of `(master_seed,
//! rep)`, and aggregation happens in replication order after the join, so
//! results are bit-identical regardless of the worker count.
//!
//! The simulator reports growth diagnostics only; almost-sure convergence is
//! not finitely decidable, so verdicts stay with [`crate::criteria`].

use crate::numeric::stats::{mean, median, quantile, sample_sd};
use crate::numeric::sum::CompensatedSum;
use crate::rational::{rat_string, to_f64, Rat};
use crate::tailmodel::DistributionSpec;
use crate::Real;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonteCarloError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

/// Derives the replication seed from the master seed.
///
/// SplitMix64 finalizer applied to `master XOR ((rep+1) * golden)`. This
/// mixing is part of the output contract: changing it changes every archived
/// trajectory, so it stays fixed.
pub fn child_seed(master_seed: u64, rep: u32) -> u64 {
    let mut z = master_seed ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(u64::from(rep) + 1);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Simulation parameters. Checkpoints are the dyadic points `2^k <= n_max`.
#[derive(Debug, Clone, Serialize)]
pub struct SimConfig {
    pub master_seed: u64,
    pub reps: u32,
    pub n_max: u64,
    pub checkpoints: Vec<u64>,
    #[serde(with = "rat_string")]
    pub p: Rat,
    #[serde(with = "rat_string")]
    pub q: Rat,
}

impl SimConfig {
    /// Config with the full dyadic checkpoint set.
    pub fn new(
        master_seed: u64,
        reps: u32,
        n_max: u64,
        p: Rat,
        q: Rat,
    ) -> Result<Self, MonteCarloError> {
        if !n_max.is_power_of_two() || n_max < 2 {
            return Err(MonteCarloError::InvalidConfig(format!(
                "n_max must be a power of two >= 2, got {n_max}"
            )));
        }
        let checkpoints: Vec<u64> = (1..=n_max.trailing_zeros())
            .map(|k| 1u64 << k)
            .collect();
        let cfg = Self {
            master_seed,
            reps,
            n_max,
            checkpoints,
            p,
            q,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), MonteCarloError> {
        if self.reps < 1 {
            return Err(MonteCarloError::InvalidConfig(
                "reps must be >= 1".to_string(),
            ));
        }
        if !self.n_max.is_power_of_two() || self.n_max < 2 {
            return Err(MonteCarloError::InvalidConfig(format!(
                "n_max must be a power of two >= 2, got {}",
                self.n_max
            )));
        }
        if self.checkpoints.is_empty()
            || self.checkpoints.windows(2).any(|w| w[0] >= w[1])
            || self
                .checkpoints
                .iter()
                .any(|&c| !c.is_power_of_two() || c > self.n_max)
        {
            return Err(MonteCarloError::InvalidConfig(
                "checkpoints must be ascending dyadic points <= n_max".to_string(),
            ));
        }
        if to_f64(self.p) <= 0.0 || to_f64(self.q) <= 0.0 {
            return Err(MonteCarloError::InvalidConfig(
                "p and q must be positive".to_string(),
            ));
        }
        Ok(())
    }
}

/// One replication's values at each checkpoint.
#[derive(Debug, Clone, Serialize)]
pub struct RepTrajectory {
    pub rep: u32,
    pub seed: u64,
    /// `T_N` per checkpoint; nondecreasing.
    pub t: Vec<Real>,
    /// `M_N = max_{N/2 < n <= N} |S_n| / n^(1/p)` per checkpoint.
    pub m: Vec<Real>,
    /// `T` overflowed to +inf at some point (counts as divergence evidence).
    pub overflowed: bool,
}

/// Cross-replication statistics at one checkpoint.
#[derive(Debug, Clone, Serialize)]
pub struct CheckpointStats {
    pub n: u64,
    pub t_mean: Real,
    pub t_median: Real,
    pub t_q05: Real,
    pub t_q95: Real,
    pub m_mean: Real,
    pub m_median: Real,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimResult {
    pub spec: String,
    pub config: SimConfig,
    pub trajectories: Vec<RepTrajectory>,
    pub stats: Vec<CheckpointStats>,
}

fn run_replication(spec: &DistributionSpec, cfg: &SimConfig, rep: u32) -> RepTrajectory {
    let seed = child_seed(cfg.master_seed, rep);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inv_p = 1.0 / to_f64(cfg.p);
    let qf = to_f64(cfg.q);
    let mut s = 0.0_f64;
    let mut t_acc = CompensatedSum::new();
    let mut block_max = 0.0_f64;
    let mut t_vals = Vec::with_capacity(cfg.checkpoints.len());
    let mut m_vals = Vec::with_capacity(cfg.checkpoints.len());
    let mut overflowed = false;
    let mut next_cp = 0usize;
    for n in 1..=cfg.n_max {
        s += spec.draw(&mut rng);
        let ratio = s.abs() / (n as Real).powf(inv_p);
        t_acc.add(ratio.powf(qf) / n as Real);
        block_max = block_max.max(ratio);
        if next_cp < cfg.checkpoints.len() && n == cfg.checkpoints[next_cp] {
            let t = t_acc.value();
            if !t.is_finite() {
                overflowed = true;
            }
            t_vals.push(t);
            m_vals.push(block_max);
            block_max = 0.0;
            next_cp += 1;
        }
    }
    RepTrajectory {
        rep,
        seed,
        t: t_vals,
        m: m_vals,
        overflowed,
    }
}

/// Simulates the weighted series `T_N` across replications.
///
/// Deterministic for a given `(spec, config)`: replications run
/// independently (in parallel when a rayon pool is available) and are
/// aggregated in replication order.
pub fn simulate_weighted_series(
    spec: &DistributionSpec,
    cfg: &SimConfig,
) -> Result<SimResult, MonteCarloError> {
    cfg.validate()?;
    let trajectories: Vec<RepTrajectory> = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| run_replication(spec, cfg, rep))
        .collect();
    let stats = (0..cfg.checkpoints.len())
        .map(|ci| {
            let t: Vec<Real> = trajectories.iter().map(|tr| tr.t[ci]).collect();
            let m: Vec<Real> = trajectories.iter().map(|tr| tr.m[ci]).collect();
            CheckpointStats {
                n: cfg.checkpoints[ci],
                t_mean: mean(&t),
                t_median: median(&t),
                t_q05: quantile(&t, 0.05),
                t_q95: quantile(&t, 0.95),
                m_mean: mean(&m),
                m_median: median(&m),
            }
        })
        .collect();
    Ok(SimResult {
        spec: spec.name().to_string(),
        config: cfg.clone(),
        trajectories,
        stats,
    })
}

/// Per-checkpoint statistics of the block sup `M_N` only.
pub fn sup_norm_trajectory(
    spec: &DistributionSpec,
    cfg: &SimConfig,
) -> Result<Vec<CheckpointStats>, MonteCarloError> {
    simulate_weighted_series(spec, cfg).map(|r| r.stats)
}

/// Monte Carlo estimate (mean, standard error) of the single expectation-
/// series term `(1/n) E (|S_n| / n^(1/p))^q`.
pub fn estimate_expected_term(
    spec: &DistributionSpec,
    p: Rat,
    q: Rat,
    n: u64,
    reps: u32,
    seed: u64,
) -> Result<(Real, Real), MonteCarloError> {
    if reps < 30 {
        return Err(MonteCarloError::InvalidConfig(format!(
            "need reps >= 30 for a standard error, got {reps}"
        )));
    }
    let inv_p = 1.0 / to_f64(p);
    let qf = to_f64(q);
    let values: Vec<Real> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = ChaCha8Rng::seed_from_u64(child_seed(seed, rep));
            let mut s = 0.0_f64;
            for _ in 0..n {
                s += spec.draw(&mut rng);
            }
            (s.abs() / (n as Real).powf(inv_p)).powf(qf) / n as Real
        })
        .collect();
    let m = mean(&values);
    let se = sample_sd(&values) / (reps as Real).sqrt();
    Ok((m, se))
}
