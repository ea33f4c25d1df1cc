//! Estimator tuning parameters.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::path::PricePath;
use crate::spot::bipower_variation;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("window exponent b must lie strictly inside (0,1), got {0}")]
    BadWindowExponent(String),
    #[error("cannot parse '{0}' as a decimal window exponent")]
    UnparseableExponent(String),
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("truncation exponent omega must lie in (0, 1/2), got {0}")]
    BadOmega(f64),
    #[error("window length k_n={k_n} out of range for n={n} (need 1 <= k_n <= n/2 - 1)")]
    WindowTooLarge { k_n: usize, n: usize },
}

/// Window exponent `b` stored as an exact rational.
///
/// The asymptotic-variance formulas switch branches on `b = 1/2` via sharp
/// indicators, so the comparison must be exact rather than a float test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowExponent {
    num: u64,
    den: u64,
}

impl WindowExponent {
    pub fn new(num: u64, den: u64) -> Result<Self, ConfigError> {
        if den == 0 || num == 0 || num >= den {
            return Err(ConfigError::BadWindowExponent(format!("{num}/{den}")));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub const HALF: WindowExponent = WindowExponent { num: 1, den: 2 };

    /// Parses a decimal literal like "0.5" or "0.55" exactly.
    pub fn parse_decimal(s: &str) -> Result<Self, ConfigError> {
        let s = s.trim();
        let bad = || ConfigError::UnparseableExponent(s.to_string());
        let (int_part, frac_part) = match s.split_once('.') {
            Some((a, b)) => (a, b),
            None => (s, ""),
        };
        if int_part.parse::<u64>().map_err(|_| bad())? != 0 {
            return Err(ConfigError::BadWindowExponent(s.to_string()));
        }
        if frac_part.is_empty() || frac_part.len() > 15 || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let num: u64 = frac_part.parse().map_err(|_| bad())?;
        let den = 10u64.pow(frac_part.len() as u32);
        Self::new(num, den)
    }

    /// Parses from an f64 via its shortest decimal representation, so config
    /// files may write `b = 0.55` and still get the exact rational 11/20.
    pub fn from_f64(v: f64) -> Result<Self, ConfigError> {
        Self::parse_decimal(&format!("{v}"))
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_half(&self) -> bool {
        2 * self.num == self.den
    }

    /// `b <= 1/2`, exactly.
    pub fn le_half(&self) -> bool {
        2 * self.num <= self.den
    }

    /// `b >= 1/2`, exactly.
    pub fn ge_half(&self) -> bool {
        2 * self.num >= self.den
    }

    /// `b ∧ (1−b)`.
    pub fn min_with_complement(&self) -> f64 {
        let b = self.value();
        b.min(1.0 - b)
    }
}

impl std::fmt::Display for WindowExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Fully resolved tuning parameters for one path.
///
/// `kappa` is always kept consistent with the actual window length via
/// `kappa = k_n / n^b`; the variance plug-ins rely on that identity.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EstimatorConfig {
    /// Frequency of the characteristic-function transform.
    pub u: f64,
    /// Window exponent in `k_n = ⌊κ n^b⌋`.
    pub b: WindowExponent,
    /// Window-rule constant, resolved as `k_n / n^b`.
    pub kappa: f64,
    /// Local window length in increments.
    pub k_n: usize,
    /// Truncation level: increments with `|Δ X| > alpha·Δn^omega` are dropped
    /// by the thresholded estimators.
    pub alpha: f64,
    /// Truncation exponent in (0, 1/2).
    pub omega: f64,
}

impl EstimatorConfig {
    /// Builds a config with `k_n = ⌊kappa·n^b⌋` for a path of `n` increments.
    pub fn from_rule(
        u: f64,
        b: WindowExponent,
        kappa: f64,
        n: usize,
        alpha: f64,
        omega: f64,
    ) -> Result<Self, ConfigError> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(ConfigError::NonPositive {
                name: "kappa",
                value: kappa,
            });
        }
        let k_n = (kappa * (n as f64).powf(b.value())).floor() as usize;
        Self::with_window(u, b, k_n, n, alpha, omega)
    }

    /// Builds a config with an explicit window length; `kappa` is derived.
    pub fn with_window(
        u: f64,
        b: WindowExponent,
        k_n: usize,
        n: usize,
        alpha: f64,
        omega: f64,
    ) -> Result<Self, ConfigError> {
        if !(u.is_finite() && u > 0.0) {
            return Err(ConfigError::NonPositive { name: "u", value: u });
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(ConfigError::NonPositive {
                name: "alpha",
                value: alpha,
            });
        }
        if !(omega > 0.0 && omega < 0.5) {
            return Err(ConfigError::BadOmega(omega));
        }
        if k_n < 1 || k_n + 1 > n / 2 {
            return Err(ConfigError::WindowTooLarge { k_n, n });
        }
        let kappa = k_n as f64 / (n as f64).powf(b.value());
        Ok(Self {
            u,
            b,
            kappa,
            k_n,
            alpha,
            omega,
        })
    }

    /// Threshold `alpha·Δn^omega` applied by the truncated estimators.
    pub fn truncation_level(&self, delta_n: f64) -> f64 {
        self.alpha * delta_n.powf(self.omega)
    }
}

/// How `u` is chosen when resolving a config against a path.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub enum FrequencyRule {
    Fixed(f64),
    /// `u = (ln n)^{-1/40} / sqrt(BV_n)`, a consistent proxy for
    /// `(ln n)^{-1/40} / sqrt(∫σ²dt)`.
    LogBipower,
}

/// How the truncation level `alpha` is chosen.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub enum TruncationRule {
    Fixed(f64),
    /// `alpha = c·sqrt(BV_n)`; the comparison studies use `c = 5`.
    BipowerMultiple(f64),
}

/// How `k_n` is chosen.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub enum WindowRule {
    /// `k_n = ⌊kappa·n^b⌋`.
    PowerLaw { kappa: f64 },
    /// `k_n = ⌊sqrt(1/Δn)⌋` (the b = 1/2 rate rule stated in observation time).
    SqrtInvDelta,
    /// Explicit window length.
    Fixed(usize),
}

/// Unresolved configuration; turned into an [`EstimatorConfig`] per path.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConfigSpec {
    pub u: FrequencyRule,
    pub b: WindowExponent,
    pub window: WindowRule,
    pub alpha: TruncationRule,
    pub omega: f64,
}

impl ConfigSpec {
    /// Defaults used by the Monte Carlo comparison studies: data-driven `u`,
    /// b = 1/2 with `k_n = ⌊sqrt(1/Δn)⌋`, `alpha = 5·sqrt(BV)`, `omega = 0.49`.
    pub fn monte_carlo_default() -> Self {
        Self {
            u: FrequencyRule::LogBipower,
            b: WindowExponent::HALF,
            window: WindowRule::SqrtInvDelta,
            alpha: TruncationRule::BipowerMultiple(5.0),
            omega: 0.49,
        }
    }

    /// Defaults used on real data: `u = 1`, `b = 0.55`, `kappa = 2`.
    pub fn empirical_default() -> Self {
        Self {
            u: FrequencyRule::Fixed(1.0),
            b: WindowExponent::new(11, 20).expect("valid rational"),
            window: WindowRule::PowerLaw { kappa: 2.0 },
            alpha: TruncationRule::BipowerMultiple(5.0),
            omega: 0.49,
        }
    }

    pub fn resolve(&self, path: &PricePath) -> Result<EstimatorConfig, ConfigError> {
        let n = path.n();
        let bv = match (self.u, self.alpha) {
            (FrequencyRule::Fixed(_), TruncationRule::Fixed(_)) => 0.0,
            _ => bipower_variation(path),
        };
        let u = match self.u {
            FrequencyRule::Fixed(u) => u,
            FrequencyRule::LogBipower => (n as f64).ln().powf(-1.0 / 40.0) / bv.sqrt(),
        };
        let alpha = match self.alpha {
            TruncationRule::Fixed(a) => a,
            TruncationRule::BipowerMultiple(c) => c * bv.sqrt(),
        };
        match self.window {
            WindowRule::PowerLaw { kappa } => {
                EstimatorConfig::from_rule(u, self.b, kappa, n, alpha, self.omega)
            }
            WindowRule::SqrtInvDelta => {
                let k_n = (1.0 / path.delta_n()).sqrt().floor() as usize;
                EstimatorConfig::with_window(u, self.b, k_n, n, alpha, self.omega)
            }
            WindowRule::Fixed(k_n) => {
                EstimatorConfig::with_window(u, self.b, k_n, n, alpha, self.omega)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_from_decimal() {
        let half = WindowExponent::parse_decimal("0.5").unwrap();
        assert!(half.is_half());
        assert_eq!(half, WindowExponent::HALF);
        let b = WindowExponent::parse_decimal("0.55").unwrap();
        assert_eq!(b.to_string(), "11/20");
        assert!(!b.is_half());
        assert!(b.ge_half() && !b.le_half());
        assert_eq!(b.value(), 0.55);
    }

    #[test]
    fn rational_from_f64_roundtrip() {
        let b = WindowExponent::from_f64(0.55).unwrap();
        assert_eq!(b.to_string(), "11/20");
        assert!(WindowExponent::from_f64(0.5).unwrap().is_half());
    }

    #[test]
    fn rejects_out_of_range_exponents() {
        assert!(WindowExponent::parse_decimal("1.5").is_err());
        assert!(WindowExponent::parse_decimal("0.0").is_err());
        assert!(WindowExponent::from_f64(1.0).is_err());
    }

    #[test]
    fn window_rule_floor() {
        let b = WindowExponent::HALF;
        let cfg = EstimatorConfig::from_rule(1.0, b, 1.0, 2730, 0.7, 0.49).unwrap();
        assert_eq!(cfg.k_n, 52); // ⌊sqrt(2730)⌋
        assert!((cfg.kappa - 52.0 / (2730f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn window_bounds_enforced() {
        // 1 <= k_n <= ⌊n/2⌋ - 1
        let b = WindowExponent::HALF;
        assert!(EstimatorConfig::with_window(1.0, b, 6, 12, 0.7, 0.49).is_err());
        assert!(EstimatorConfig::with_window(1.0, b, 5, 12, 0.7, 0.49).is_ok());
        assert!(EstimatorConfig::with_window(1.0, b, 0, 12, 0.7, 0.49).is_err());
    }
}
