use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// How much per-turn checking a game run performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AuditLevel {
    Off,
    #[default]
    Cheap,
    Full,
}

impl std::str::FromStr for AuditLevel {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(AuditLevel::Off),
            "cheap" => Ok(AuditLevel::Cheap),
            "full" => Ok(AuditLevel::Full),
            other => Err(ConfigError::Other(format!("unknown audit level `{other}`"))),
        }
    }
}

/// Coefficients of the scaled strategy constants.
///
/// `tau = tau_coeff * n / sqrt(ln n)` and `|S_0| = ceil(s0_coeff * n / sqrt(ln n))`,
/// the same asymptotic shapes as the proof but with coefficients that leave
/// room for `S_0` at feasible `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyCoeffs {
    pub quota: u32,
    pub tau_coeff: f64,
    pub s0_coeff: f64,
}

impl Default for StrategyCoeffs {
    fn default() -> Self {
        StrategyCoeffs {
            quota: 4,
            tau_coeff: 1.0,
            s0_coeff: 0.15,
        }
    }
}

/// Thresholds used by the audit layer, in scaled-constant form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AuditParams {
    /// Sets `S` with `|S| <= expansion_fraction * |S'|` must satisfy `|N'(S)| > 2|S|`.
    pub expansion_fraction: f64,
    /// Random subsets drawn per expansion audit, on top of the exhaustive `|S| <= 3` pass.
    pub expansion_samples: usize,
    /// Endpoint-pair threshold is `pair_coeff * n^2 / sqrt(ln n)`.
    pub pair_coeff: f64,
    /// Total turns are compared against `n + total_turn_coeff * n / sqrt(ln n)`.
    pub total_turn_coeff: f64,
    /// `|S_i|` is compared against `|S_0| + s_extra_coeff * n / sqrt(ln n)`.
    pub s_extra_coeff: f64,
    /// `|F_i|` is compared against `f_coeff * n / sqrt(ln n)`.
    pub f_coeff: f64,
}

impl Default for AuditParams {
    fn default() -> Self {
        AuditParams {
            expansion_fraction: 0.05,
            expansion_samples: 1000,
            pair_coeff: 1e-3,
            total_turn_coeff: 3.9,
            s_extra_coeff: 44.0,
            f_coeff: 90.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub n: usize,
    pub b: usize,
    /// A vertex is troublesome once `d_B(v) > tau`.
    pub tau: u32,
    /// Maker's out-degree service target `K`.
    pub quota: u32,
    pub s0_size: usize,
    pub max_turns: usize,
    pub seed: u64,
    pub audit_level: AuditLevel,
    /// Only rotations whose pivot lies in `S` are used by the rotation engine.
    pub limited_only: bool,
    /// Maximum number of path states expanded per rotation closure.
    pub rotation_budget: usize,
    pub audit: AuditParams,
}

/// `n / sqrt(ln n)`, the scale of every strategy constant.
pub fn scale(n: usize) -> f64 {
    let n = n as f64;
    n / n.ln().sqrt()
}

/// `floor(beta * n / ln n)`, never below 1.
pub fn bias_from_beta(n: usize, beta: f64) -> usize {
    let nf = n as f64;
    ((beta * nf / nf.ln()).floor() as usize).max(1)
}

impl GameConfig {
    /// Config with scaled constants derived from `coeffs`.
    pub fn scaled(n: usize, b: usize, coeffs: StrategyCoeffs, seed: u64) -> GameConfig {
        let unit = if n >= 2 { scale(n) } else { 1.0 };
        let tau = (coeffs.tau_coeff * unit).floor().max(1.0) as u32;
        let k = coeffs.quota as usize;
        let hi = (n / 3).max(1);
        let s0 = ((coeffs.s0_coeff * unit).ceil() as usize).max(k + 2).min(hi);
        GameConfig {
            n,
            b,
            tau,
            quota: coeffs.quota,
            s0_size: s0,
            max_turns: 4 * n,
            seed,
            audit_level: AuditLevel::Cheap,
            limited_only: true,
            rotation_budget: 512,
            audit: AuditParams::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let n = self.n;
        if n < 3 {
            return Err(ConfigError::TooFewVertices(n));
        }
        if self.b < 1 || self.b > n - 2 {
            return Err(ConfigError::Bias { b: self.b, max: n - 2 });
        }
        if self.tau == 0 || self.tau as usize >= n {
            return Err(ConfigError::Tau { tau: self.tau, n });
        }
        if self.quota < 1 {
            return Err(ConfigError::Quota);
        }
        if self.s0_size == 0 || self.s0_size >= n {
            return Err(ConfigError::SkeletonSize { s0: self.s0_size, n });
        }
        if self.max_turns < n {
            return Err(ConfigError::MaxTurns { max_turns: self.max_turns, n });
        }
        if self.rotation_budget == 0 {
            return Err(ConfigError::Other("rotation_budget must be positive".into()));
        }
        Ok(())
    }
}
