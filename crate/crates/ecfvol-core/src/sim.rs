//! Jump-diffusion simulator.
//!
//! Data-generating process on `[0, T]`:
//!
//! ```text
//! dX_t   = (v - σ_t²/2) dt + σ_t (ρ dW_t + sqrt(1-ρ²) dV_t) + γ (dL_t + dJ_t),
//! dσ_t²  = ζ (θ - σ_t²) dt + η σ_t dW_t,
//! ```
//!
//! where `W ⟂ V` are Brownian motions, `L` is a strictly symmetric stable
//! process with index `beta` normalised so `E[exp(iuL_t)] = exp(-|u|^β t)`,
//! and `J` is compound Poisson with intensity `lambda_cp` and centered
//! Gaussian marks. The variance factor is square-root diffusion; the Feller
//! condition `2ζθ > η²` keeps it strictly positive.
//!
//! All rates are per unit of simulation time. The presets in this workspace
//! use one month as the unit (`T = 1` for a month of observations, `T = 12`
//! for a year); nothing is rescaled implicitly.
//!
//! Everything is a pure function of `(params, n, T, seed)`: one counter-based
//! ChaCha stream per call, so identical inputs give bit-identical paths and
//! replications can run concurrently.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::KahanSum;
use crate::path::PricePath;
use crate::stable::sample_symmetric_stable;

/// Internal Euler substeps per observation interval; cuts discretization
/// bias of the square-root variance factor well below estimation noise.
const SUBSTEPS: usize = 10;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("Feller condition violated: need 2·zeta·theta > eta² (2·{zeta}·{theta} <= {eta}²)")]
    FellerViolated { zeta: f64, theta: f64, eta: f64 },
    #[error("{name} out of range: {value} ({constraint})")]
    BadParam {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("need at least 2 observation intervals, got {0}")]
    TooFewSteps(usize),
    #[error("variance path must be strictly positive (index {0})")]
    NonPositiveVariance(usize),
    #[error("variance path needs at least 3 points, got {0}")]
    VariancePathTooShort(usize),
}

/// Model parameters; see the module docs for the dynamics.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ModelParams {
    /// Initial log-price.
    pub x0: f64,
    /// Initial variance.
    pub sigma2_0: f64,
    /// Price drift.
    pub v: f64,
    /// Variance mean-reversion speed.
    pub zeta: f64,
    /// Long-run variance level.
    pub theta: f64,
    /// Volatility-of-volatility coefficient.
    pub eta: f64,
    /// Correlation between the price and variance drivers, in [-1, 1].
    pub rho: f64,
    /// Jump scale multiplying both jump parts.
    pub gamma: f64,
    /// Stable index of the infinite-activity part, in (0, 2).
    pub beta: f64,
    /// Compound-Poisson intensity.
    pub lambda_cp: f64,
    /// Standard deviation of the compound-Poisson marks.
    pub jump_sd: f64,
    /// Optional cap (in log-return units) on the per-interval stable jump
    /// contribution `γ·Δn^{1/β}·S`. `None` leaves the exact stable law. A cap
    /// turns `L` into a truncated stable process, which has the same index
    /// and the same dense small-jump structure but bounded large jumps; the
    /// estimation theory covers such tempered laws, and the published
    /// finite-sample experiments are only reproducible without the
    /// unbounded-tail draws of the exact law.
    #[serde(default)]
    pub stable_jump_cap: Option<f64>,
}

impl ModelParams {
    /// Baseline used throughout the numerical studies (monthly time unit):
    /// X₀=0, σ₀²=0.02, v=0.05, ζ=5, θ=0.02, λ'=3, mark sd 0.01.
    pub fn baseline() -> Self {
        Self {
            x0: 0.0,
            sigma2_0: 0.02,
            v: 0.05,
            zeta: 5.0,
            theta: 0.02,
            eta: 0.3,
            rho: -0.6,
            gamma: 0.0,
            beta: 1.0,
            lambda_cp: 3.0,
            jump_sd: 0.01,
            stable_jump_cap: None,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let finite = [
            ("x0", self.x0),
            ("sigma2_0", self.sigma2_0),
            ("v", self.v),
            ("zeta", self.zeta),
            ("theta", self.theta),
            ("eta", self.eta),
            ("rho", self.rho),
            ("gamma", self.gamma),
            ("beta", self.beta),
            ("lambda_cp", self.lambda_cp),
            ("jump_sd", self.jump_sd),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(SimError::BadParam {
                    name,
                    value,
                    constraint: "must be finite",
                });
            }
        }
        if self.sigma2_0 <= 0.0 {
            return Err(SimError::BadParam {
                name: "sigma2_0",
                value: self.sigma2_0,
                constraint: "must be > 0",
            });
        }
        for (name, value) in [
            ("zeta", self.zeta),
            ("theta", self.theta),
            ("eta", self.eta),
            ("gamma", self.gamma),
            ("lambda_cp", self.lambda_cp),
            ("jump_sd", self.jump_sd),
        ] {
            if value < 0.0 {
                return Err(SimError::BadParam {
                    name,
                    value,
                    constraint: "must be >= 0",
                });
            }
        }
        if self.rho.abs() > 1.0 {
            return Err(SimError::BadParam {
                name: "rho",
                value: self.rho,
                constraint: "must lie in [-1, 1]",
            });
        }
        if let Some(cap) = self.stable_jump_cap {
            if !(cap > 0.0 && cap.is_finite()) {
                return Err(SimError::BadParam {
                    name: "stable_jump_cap",
                    value: cap,
                    constraint: "must be positive and finite when set",
                });
            }
        }
        if self.gamma > 0.0 && !(self.beta > 0.0 && self.beta < 2.0) {
            return Err(SimError::BadParam {
                name: "beta",
                value: self.beta,
                constraint: "must lie in (0, 2)",
            });
        }
        if 2.0 * self.zeta * self.theta <= self.eta * self.eta {
            return Err(SimError::FellerViolated {
                zeta: self.zeta,
                theta: self.theta,
                eta: self.eta,
            });
        }
        Ok(())
    }

    /// Diffusion coefficient of σ (not σ²) against the price driver:
    /// `σ̃ = ηρ/2`.
    pub fn sigma_tilde(&self) -> f64 {
        self.eta * self.rho / 2.0
    }

    /// Diffusion coefficient of σ against the orthogonal driver:
    /// `σ̃' = η·sqrt(1-ρ²)/2`.
    pub fn sigma_tilde_prime(&self) -> f64 {
        self.eta * (1.0 - self.rho * self.rho).sqrt() / 2.0
    }

    /// `σ̃² + σ̃'² = η²/4`, the squared vol-of-vol split across drivers.
    pub fn vol_diffusion_sq(&self) -> f64 {
        self.eta * self.eta / 4.0
    }
}

/// A simulated path with its latent ground truth.
#[derive(Debug, Clone)]
pub struct SimulatedPath {
    /// Number of observation intervals.
    pub n: usize,
    /// Observation step `T/n`.
    pub delta_n: f64,
    /// Log-prices on the observation grid, length `n+1`.
    pub log_prices: Vec<f64>,
    /// Latent variance on the observation grid, length `n+1`.
    pub sigma2: Vec<f64>,
    /// `ηρ · Δn·Σ_{i<n} σ²_i` (left Riemann sum of the leverage target).
    pub true_leverage: f64,
    /// `η² · Δn·Σ_{i<n} σ²_i` (left Riemann sum of the vol-of-vol target).
    pub true_vov: f64,
    /// Seed that produced the path.
    pub seed: u64,
}

impl SimulatedPath {
    pub fn price_path(&self) -> PricePath {
        PricePath::new(self.log_prices.clone(), self.delta_n).expect("simulated path is valid")
    }

    /// Left Riemann sum `Δn·Σ_{i<n} σ²_i ≈ ∫σ²dt`.
    pub fn integrated_variance(&self) -> f64 {
        riemann_integral(&self.sigma2, self.delta_n)
    }
}

fn riemann_integral(sigma2: &[f64], delta_n: f64) -> f64 {
    let mut acc = KahanSum::new();
    for &s in &sigma2[..sigma2.len() - 1] {
        acc.add(s);
    }
    delta_n * acc.value()
}

fn ground_truth(params: &ModelParams, sigma2: &[f64], delta_n: f64) -> (f64, f64) {
    let iv = riemann_integral(sigma2, delta_n);
    (params.eta * params.rho * iv, params.eta * params.eta * iv)
}

/// Simulates `n` observation intervals over `[0, T]`.
///
/// Full-truncation Euler on `SUBSTEPS` internal steps per interval: the
/// negative part of σ² is zeroed inside every drift and diffusion argument,
/// and the stored path is the truncated value.
pub fn simulate(params: &ModelParams, n: usize, t: f64, seed: u64) -> Result<SimulatedPath, SimError> {
    params.validate()?;
    if n < 2 {
        return Err(SimError::TooFewSteps(n));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(SimError::BadParam {
            name: "T",
            value: t,
            constraint: "must be > 0",
        });
    }
    let delta_n = t / n as f64;
    let dt = delta_n / SUBSTEPS as f64;
    let sqrt_dt = dt.sqrt();
    let rho_c = (1.0 - params.rho * params.rho).sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log_prices = Vec::with_capacity(n + 1);
    let mut sigma2 = Vec::with_capacity(n + 1);
    let mut x = params.x0;
    let mut s2 = params.sigma2_0;
    log_prices.push(x);
    sigma2.push(s2);

    for _ in 0..n {
        for _ in 0..SUBSTEPS {
            let z1: f64 = StandardNormal.sample(&mut rng);
            let z2: f64 = StandardNormal.sample(&mut rng);
            let dw = sqrt_dt * z1;
            let dv = sqrt_dt * z2;
            let s2p = s2.max(0.0);
            let s = s2p.sqrt();
            x += (params.v - s2p / 2.0) * dt + s * (params.rho * dw + rho_c * dv);
            s2 += params.zeta * (params.theta - s2p) * dt + params.eta * s * dw;
            s2 = s2.max(0.0);
        }
        x += sample_jumps(params, delta_n, &mut rng);
        log_prices.push(x);
        sigma2.push(s2);
    }

    let (true_leverage, true_vov) = ground_truth(params, &sigma2, delta_n);
    Ok(SimulatedPath {
        n,
        delta_n,
        log_prices,
        sigma2,
        true_leverage,
        true_vov,
        seed,
    })
}

/// Regenerates only the price path conditional on a given variance path.
///
/// Conditioning on σ² pins the increments of its driver W (for η > 0):
/// `ΔW_i = (Δσ²_i − ζ(θ−σ²_i)Δn) / (η σ_i)` on the observation grid. The
/// orthogonal Brownian part and both jump parts are drawn fresh. For η = 0
/// the variance path carries no information about W, which is drawn fresh.
pub fn resample_price(
    vol: &[f64],
    params: &ModelParams,
    t: f64,
    seed: u64,
) -> Result<SimulatedPath, SimError> {
    params.validate()?;
    if vol.len() < 3 {
        return Err(SimError::VariancePathTooShort(vol.len()));
    }
    if let Some(i) = vol.iter().position(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(SimError::NonPositiveVariance(i));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(SimError::BadParam {
            name: "T",
            value: t,
            constraint: "must be > 0",
        });
    }
    let n = vol.len() - 1;
    let delta_n = t / n as f64;
    let sqrt_dn = delta_n.sqrt();
    let rho_c = (1.0 - params.rho * params.rho).sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log_prices = Vec::with_capacity(n + 1);
    let mut x = params.x0;
    log_prices.push(x);

    for i in 0..n {
        let s2 = vol[i];
        let s = s2.sqrt();
        let dw = if params.eta > 0.0 {
            (vol[i + 1] - s2 - params.zeta * (params.theta - s2) * delta_n) / (params.eta * s)
        } else {
            let z: f64 = StandardNormal.sample(&mut rng);
            sqrt_dn * z
        };
        let z2: f64 = StandardNormal.sample(&mut rng);
        let dv = sqrt_dn * z2;
        x += (params.v - s2 / 2.0) * delta_n + s * (params.rho * dw + rho_c * dv);
        x += sample_jumps(params, delta_n, &mut rng);
        log_prices.push(x);
    }

    let (true_leverage, true_vov) = ground_truth(params, vol, delta_n);
    Ok(SimulatedPath {
        n,
        delta_n,
        log_prices,
        sigma2: vol.to_vec(),
        true_leverage,
        true_vov,
        seed,
    })
}

fn sample_jumps<R: Rng + ?Sized>(params: &ModelParams, delta_n: f64, rng: &mut R) -> f64 {
    if params.gamma == 0.0 {
        return 0.0;
    }
    let stable = sample_symmetric_stable(params.beta, rng).expect("beta validated");
    let mut jump = delta_n.powf(1.0 / params.beta) * stable;
    if let Some(cap) = params.stable_jump_cap {
        jump = (params.gamma * jump).clamp(-cap, cap) / params.gamma;
    }
    if params.lambda_cp > 0.0 {
        let count = Poisson::new(params.lambda_cp * delta_n)
            .expect("positive intensity")
            .sample(rng) as u64;
        for _ in 0..count {
            let z: f64 = StandardNormal.sample(rng);
            jump += params.jump_sd * z;
        }
    }
    params.gamma * jump
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_jump_params() -> ModelParams {
        ModelParams {
            rho: -0.4,
            eta: 0.2,
            gamma: 0.0,
            ..ModelParams::baseline()
        }
    }

    #[test]
    fn baseline_matches_study_setting() {
        let p = ModelParams::baseline();
        assert_eq!(p.x0, 0.0);
        assert_eq!(p.sigma2_0, 0.02);
        assert_eq!(p.v, 0.05);
        assert_eq!(p.lambda_cp, 3.0);
        assert_eq!(p.theta, 0.02);
        assert_eq!(p.zeta, 5.0);
        p.validate().unwrap();
    }

    #[test]
    fn feller_violation_rejected() {
        let p = ModelParams {
            eta: 0.5, // 2·5·0.02 = 0.2 <= 0.25
            ..ModelParams::baseline()
        };
        assert!(matches!(p.validate(), Err(SimError::FellerViolated { .. })));
    }

    #[test]
    fn identical_seed_bit_identical_output() {
        let p = ModelParams {
            gamma: 0.2,
            beta: 1.5,
            ..ModelParams::baseline()
        };
        let a = simulate(&p, 500, 1.0, 42).unwrap();
        let b = simulate(&p, 500, 1.0, 42).unwrap();
        assert_eq!(a.log_prices, b.log_prices);
        assert_eq!(a.sigma2, b.sigma2);
        let c = simulate(&p, 500, 1.0, 43).unwrap();
        assert_ne!(a.log_prices, c.log_prices);
    }

    #[test]
    fn zero_vov_gives_deterministic_variance_ode() {
        // With η = 0, σ² follows dσ² = ζ(θ-σ²)dt: monotone toward θ.
        let p = ModelParams {
            eta: 0.0,
            sigma2_0: 0.05,
            ..ModelParams::baseline()
        };
        let path = simulate(&p, 200, 1.0, 7).unwrap();
        for w in path.sigma2.windows(2) {
            assert!(w[1] <= w[0] && w[1] >= p.theta, "not monotone toward theta");
        }
        let expected_end = p.theta + (0.05 - p.theta) * (-p.zeta).exp();
        assert!((path.sigma2[200] - expected_end).abs() < 1e-3);
    }

    #[test]
    fn variance_path_strictly_positive() {
        let p = ModelParams {
            eta: 0.4, // close to the Feller boundary 2ζθ = 0.2 vs η² = 0.16
            ..ModelParams::baseline()
        };
        for seed in 0..20 {
            let path = simulate(&p, 2730, 1.0, seed).unwrap();
            assert!(path.sigma2.iter().all(|&s| s > 0.0));
        }
    }

    #[test]
    fn true_targets_match_riemann_sum_exactly() {
        let p = ModelParams::baseline();
        let path = simulate(&p, 300, 1.0, 3).unwrap();
        let iv: f64 = path.sigma2[..300].iter().sum::<f64>() * path.delta_n;
        assert!((path.true_leverage - p.eta * p.rho * iv).abs() < 1e-15);
        assert!((path.true_vov - p.eta * p.eta * iv).abs() < 1e-15);
    }

    #[test]
    fn riemann_vs_trapezoid_within_one_correction_term() {
        let p = ModelParams::baseline();
        let path = simulate(&p, 2730, 1.0, 19).unwrap();
        let left = path.integrated_variance();
        let trapezoid = left + path.delta_n * (path.sigma2[path.n] - path.sigma2[0]) / 2.0;
        let correction = path.delta_n * (path.sigma2[path.n] - path.sigma2[0]).abs() / 2.0;
        assert!((left - trapezoid).abs() <= correction + 1e-18);
    }

    #[test]
    fn no_jump_increments_stay_gaussian_scale() {
        // Without jumps, no increment should exceed 8·σ_max·√Δn.
        let p = ModelParams {
            lambda_cp: 0.0,
            ..no_jump_params()
        };
        for seed in 0..1000 {
            let path = simulate(&p, 2730, 1.0, seed).unwrap();
            let sigma_max = path
                .sigma2
                .iter()
                .cloned()
                .fold(0.0f64, f64::max)
                .sqrt();
            let bound = 8.0 * sigma_max * path.delta_n.sqrt();
            let max_abs = path
                .log_prices
                .windows(2)
                .map(|w| (w[1] - w[0]).abs())
                .fold(0.0f64, f64::max);
            assert!(max_abs <= bound, "seed {seed}: {max_abs} > {bound}");
        }
    }

    #[test]
    fn no_jump_increments_pass_normality_screen() {
        // Jarque–Bera screen on increments standardised by σ_{t_{i-1}}√Δn;
        // p-value for a χ²(2) statistic is exp(-JB/2).
        let p = ModelParams {
            lambda_cp: 0.0,
            ..no_jump_params()
        };
        let mut passed = 0;
        let seeds = 60;
        for seed in 0..seeds {
            let path = simulate(&p, 2730, 1.0, 1000 + seed).unwrap();
            let z: Vec<f64> = (0..path.n)
                .map(|i| {
                    (path.log_prices[i + 1] - path.log_prices[i])
                        / (path.sigma2[i].sqrt() * path.delta_n.sqrt())
                })
                .collect();
            let n = z.len() as f64;
            let mean = z.iter().sum::<f64>() / n;
            let m2 = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            let m3 = z.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
            let m4 = z.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
            let skew = m3 / m2.powf(1.5);
            let kurt = m4 / (m2 * m2);
            let jb = n * (skew * skew / 6.0 + (kurt - 3.0).powi(2) / 24.0);
            if (-jb / 2.0).exp() > 0.001 {
                passed += 1;
            }
        }
        assert!(
            passed as f64 >= 0.95 * seeds as f64,
            "only {passed}/{seeds} seeds passed the normality screen"
        );
    }

    #[test]
    fn resample_deterministic_and_rejects_bad_vol() {
        let p = no_jump_params();
        let base = simulate(&p, 400, 1.0, 5).unwrap();
        let a = resample_price(&base.sigma2, &p, 1.0, 99).unwrap();
        let b = resample_price(&base.sigma2, &p, 1.0, 99).unwrap();
        assert_eq!(a.log_prices, b.log_prices);
        assert_eq!(a.sigma2, base.sigma2);

        let mut bad = base.sigma2.clone();
        bad[7] = 0.0;
        assert!(matches!(
            resample_price(&bad, &p, 1.0, 1),
            Err(SimError::NonPositiveVariance(7))
        ));
        assert!(resample_price(&base.sigma2[..2], &p, 1.0, 1).is_err());
    }

    #[test]
    fn resample_constant_vol_realized_variance() {
        // Flat σ² = 0.02 with η = 0: realized QV over a year of data should
        // land within 5% of 0.02·T.
        let p = ModelParams {
            eta: 0.0,
            gamma: 0.0,
            rho: 0.0,
            ..ModelParams::baseline()
        };
        let n = 2730 * 12;
        let vol = vec![0.02; n + 1];
        let t = 12.0;
        let path = resample_price(&vol, &p, t, 21).unwrap();
        let qv: f64 = path
            .log_prices
            .windows(2)
            .map(|w| (w[1] - w[0]).powi(2))
            .sum();
        assert!((qv - 0.02 * t).abs() / (0.02 * t) < 0.05, "qv = {qv}");
    }
}
