//! Run manifests embedded in every output.
//!
//! The digest covers everything that determines the output bytes (command,
//! spec, exponents, seed, sizes) and excludes wall-clock time, so two runs
//! with identical manifests produce identical data files. Wall-clock is
//! reported in the JSON manifest only, never in CSV headers.

use serde::Serialize;
use std::fmt::Write as _;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub spec: String,
    pub p: Option<String>,
    pub q: Option<String>,
    pub seed: Option<u64>,
    pub config_digest: String,
    pub version: String,
    /// Elapsed seconds; excluded from the digest and from CSV headers.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_s: Option<f64>,
}

impl RunManifest {
    /// Builds the manifest; `extras` are further digest-relevant settings as
    /// `key=value` pairs in a fixed order.
    pub fn new(
        command: &str,
        spec: &str,
        p: Option<String>,
        q: Option<String>,
        seed: Option<u64>,
        extras: &[(&str, String)],
    ) -> Self {
        let mut canon = format!(
            "command={command}|spec={spec}|p={}|q={}|seed={}",
            p.as_deref().unwrap_or("-"),
            q.as_deref().unwrap_or("-"),
            seed.map_or_else(|| "-".to_string(), |s| s.to_string()),
        );
        for (k, v) in extras {
            let _ = write!(canon, "|{k}={v}");
        }
        let _ = write!(canon, "|version={TOOL_VERSION}");
        Self {
            command: command.to_string(),
            spec: spec.to_string(),
            p,
            q,
            seed,
            config_digest: format!("fnv1a:{:016x}", fnv1a64(canon.as_bytes())),
            version: TOOL_VERSION.to_string(),
            wall_clock_s: None,
        }
    }

    /// Deterministic header lines for CSV outputs (no wall clock).
    pub fn csv_header(&self) -> String {
        format!(
            "# slln {} v{}\n# spec={} p={} q={} seed={} digest={}\n",
            self.command,
            self.version,
            self.spec,
            self.p.as_deref().unwrap_or("-"),
            self.q.as_deref().unwrap_or("-"),
            self.seed.map_or_else(|| "-".to_string(), |s| s.to_string()),
            self.config_digest,
        )
    }
}

/// 64-bit FNV-1a. Stability across versions matters more than collision
/// resistance here; this digest is a run identifier, not a security feature.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
