//! Limiting-variance functions, variance plug-ins, feasible standardization
//! and the two hypothesis tests.
//!
//! The spot estimator's conditional noise variance is
//!
//! ```text
//! h₁(u, σ²) = 2(e^{-2u²σ²} - 2e^{-u²σ²} + 1) / (u⁴ e^{-u²σ²}) = 8·sinh²(u²σ²/2)/u⁴,
//! ```
//!
//! computed in the `sinh` form, which stays accurate as `u → 0` where
//! `h₁ → 2σ⁴`. The window-smoothing counterpart is
//! `h₂(σ², s̃) = 4σ²·s̃/3` with `s̃ = σ̃² + σ̃'²` the squared vol-of-vol split
//! across the two Brownian drivers.
//!
//! The leverage statistic converges at rate `n^{(b∧(1-b))/2}` with limit
//! variance `(2/κ)∫σ²h₁·1{b≤1/2} + 2κT∫σ²h₂·1{b≥1/2}`; the VoV statistic at
//! `n^{(1-b)/2}` with limit variance `∫[27/(2κ³)h₁² + (709/40κ)h₁h₂]·1{b=1/2}
//! + κ(837/70)∫h₂²`. Both are estimated from observables via the volatility
//! functional `Î(g) = Δn·Σ g(σ̂²_{i+})` and local difference statistics; the
//! `b = 1/2` indicators are resolved on the exact rational exponent.
//!
//! Small-jump bias: the spot estimates carry a common small-jump bias term
//! proportional to `|γ|^β u^{β-2} Δn^{1-β/2}`; every statistic here consumes
//! forward/backward *differences* of spot estimates, which cancel it to first
//! order, so no explicit bias correction is estimated or applied.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::config::EstimatorConfig;
use crate::levvov::{leverage_ecf_with_curve, vov_ecf_with_curve, EstimateError, EstimatorId};
use crate::numerics::KahanSum;
use crate::path::PricePath;
use crate::spot::{ecf_spot_curve, SpotError};

#[derive(Debug, Error)]
pub enum InferenceError {
    #[error(transparent)]
    Spot(#[from] SpotError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error("variance plug-in not usable: {component} = {value}")]
    UndefinedVariance { component: &'static str, value: f64 },
    #[error("optimal kappa undefined: denominator estimate = {0}")]
    UndefinedKappa(f64),
    #[error("local window at t-index {i} out of range (k_n={k_n}, n={n})")]
    LocalWindow { i: usize, k_n: usize, n: usize },
}

/// Conditional variance of the spot estimator's sampling noise (`h₁`).
///
/// Nonnegative, increasing in `σ²`, and `→ 2σ⁴` as `u → 0`.
#[inline]
pub fn spot_noise_variance(u: f64, sigma2: f64) -> f64 {
    let half = 0.5 * u * u * sigma2;
    let s = half.sinh();
    8.0 * s * s / (u * u * u * u)
}

/// Conditional variance contributed by the volatility moving across the
/// local window (`h₂`): `4σ²(σ̃² + σ̃'²)/3`.
#[inline]
pub fn vol_move_variance(sigma2: f64, vol_diffusion_sq: f64) -> f64 {
    4.0 * sigma2 * vol_diffusion_sq / 3.0
}

/// Local de-biased squared-difference term shared by the VoV estimator and
/// the variance plug-ins: `(3/(2k_n))d² − (3/k_n²)h₁`.
#[inline]
pub(crate) fn vov_local_term(d: f64, h1: f64, k_n: f64) -> f64 {
    (3.0 / (2.0 * k_n)) * d * d - (3.0 / (k_n * k_n)) * h1
}

/// Riemann-sum volatility functional `Î(g) = Δn·Σ_{i=0}^{n-k_n} g(σ̂²_{i+})`.
pub fn volatility_functional<G: Fn(f64) -> f64>(
    path: &PricePath,
    cfg: &EstimatorConfig,
    g: G,
) -> Result<f64, InferenceError> {
    let curve = ecf_spot_curve(path, cfg)?;
    Ok(functional_over_curve(path.delta_n(), &curve, g))
}

fn functional_over_curve<G: Fn(f64) -> f64>(delta_n: f64, fwd: &[f64], g: G) -> f64 {
    let mut acc = KahanSum::new();
    for &v in fwd {
        acc.add(g(v));
    }
    delta_n * acc.value()
}

fn check_pair_range(n: usize, k_n: usize) -> Result<(), EstimateError> {
    if n < 2 * k_n + 2 {
        return Err(EstimateError::PathTooShort {
            needed: 2 * k_n + 2,
            n,
            k_n,
        });
    }
    Ok(())
}

/// Plug-in estimate of the leverage statistic's limit variance.
pub fn leverage_avar_hat(path: &PricePath, cfg: &EstimatorConfig) -> Result<f64, InferenceError> {
    let curve = ecf_spot_curve(path, cfg)?;
    leverage_avar_hat_with_curve(path, cfg, &curve)
}

pub fn leverage_avar_hat_with_curve(
    path: &PricePath,
    cfg: &EstimatorConfig,
    fwd: &[f64],
) -> Result<f64, InferenceError> {
    let n = path.n();
    let k_n = cfg.k_n;
    check_pair_range(n, k_n)?;
    let mut total = 0.0;
    if cfg.b.le_half() {
        let term = functional_over_curve(path.delta_n(), fwd, |x| {
            x * spot_noise_variance(cfg.u, x)
        });
        total += 2.0 / cfg.kappa * term;
    }
    if cfg.b.ge_half() {
        let mut acc = KahanSum::new();
        for i in k_n + 1..=n - k_n {
            let d = fwd[i] - fwd[i - k_n - 1];
            let h1 = spot_noise_variance(cfg.u, fwd[i]);
            acc.add(fwd[i] / 3.0 * vov_local_term(d, h1, k_n as f64));
        }
        total += 2.0 * cfg.kappa * path.horizon() * acc.value();
    }
    Ok(total)
}

/// The three building blocks of the VoV variance plug-in.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct VovAvarTerms {
    /// Integrated squared noise variance, scaled by `(k_n²Δn)^{-2}`.
    pub noise_sq: f64,
    /// Noise × local-vov cross term, scaled by `(3k_n²Δn)^{-1}`.
    pub cross: f64,
    /// Integrated fourth power of spot differences, scaled by `(k_n²Δn)^{-1}`.
    pub quartic: f64,
}

pub fn vov_avar_terms(path: &PricePath, cfg: &EstimatorConfig) -> Result<VovAvarTerms, InferenceError> {
    let curve = ecf_spot_curve(path, cfg)?;
    vov_avar_terms_with_curve(path, cfg, &curve)
}

pub fn vov_avar_terms_with_curve(
    path: &PricePath,
    cfg: &EstimatorConfig,
    fwd: &[f64],
) -> Result<VovAvarTerms, InferenceError> {
    let n = path.n();
    let k_n = cfg.k_n;
    check_pair_range(n, k_n)?;
    let delta_n = path.delta_n();
    let k = k_n as f64;
    let block = k * k * delta_n;

    let noise_sq = functional_over_curve(delta_n, fwd, |x| {
        let h1 = spot_noise_variance(cfg.u, x);
        h1 * h1 / (block * block)
    });

    let mut cross_acc = KahanSum::new();
    let mut quartic_acc = KahanSum::new();
    for i in k_n + 1..=n - k_n {
        let d = fwd[i] - fwd[i - k_n - 1];
        let h1 = spot_noise_variance(cfg.u, fwd[i]);
        cross_acc.add(h1 / (3.0 * block) * vov_local_term(d, h1, k));
        let d2 = d * d;
        quartic_acc.add(d2 * d2);
    }

    Ok(VovAvarTerms {
        noise_sq,
        cross: cross_acc.value(),
        quartic: quartic_acc.value() / block,
    })
}

/// Plug-in estimate of the VoV statistic's limit variance:
/// `κ·[(891/35·Ĥ¹ + 38207/1400·Ĥ²)·1{b=1/2} + (279/70)·Ĥ³]`.
pub fn vov_avar_hat(path: &PricePath, cfg: &EstimatorConfig) -> Result<f64, InferenceError> {
    let curve = ecf_spot_curve(path, cfg)?;
    vov_avar_hat_with_curve(path, cfg, &curve)
}

pub fn vov_avar_hat_with_curve(
    path: &PricePath,
    cfg: &EstimatorConfig,
    fwd: &[f64],
) -> Result<f64, InferenceError> {
    let terms = vov_avar_terms_with_curve(path, cfg, fwd)?;
    let mut inner = 279.0 / 70.0 * terms.quartic;
    if cfg.b.is_half() {
        inner += 891.0 / 35.0 * terms.noise_sq + 38207.0 / 1400.0 * terms.cross;
    }
    Ok(cfg.kappa * inner)
}

/// Plug-in for the pointwise noise variance at `t = t_index·Δn`:
/// `h₁(u, σ̂²_{t+})`. Always nonnegative.
pub fn spot_avar_noise_hat(
    path: &PricePath,
    t_index: usize,
    cfg: &EstimatorConfig,
) -> Result<f64, InferenceError> {
    let est = crate::spot::ecf_spot_forward(path, t_index, cfg)?;
    Ok(spot_noise_variance(cfg.u, est))
}

/// Plug-in for the pointwise window-smoothing variance at `t = t_index·Δn`:
/// a local average of de-biased squared spot differences. May be negative in
/// finite samples; callers decide how to treat that.
pub fn spot_avar_move_hat(
    path: &PricePath,
    t_index: usize,
    cfg: &EstimatorConfig,
) -> Result<f64, InferenceError> {
    let n = path.n();
    let k_n = cfg.k_n;
    if t_index < k_n || t_index + 2 * k_n > n {
        return Err(InferenceError::LocalWindow {
            i: t_index,
            k_n,
            n,
        });
    }
    let curve = ecf_spot_curve(path, cfg)?;
    let k = k_n as f64;
    let mut acc = KahanSum::new();
    for i in t_index + 1..=t_index + k_n {
        let d = curve[i] - curve[i - k_n - 1];
        let h1 = spot_noise_variance(cfg.u, curve[i]);
        acc.add(1.0 / (2.0 * k) * d * d - 1.0 / (k * k) * h1);
    }
    Ok(acc.value() / (k * path.delta_n()))
}

/// Estimate of the window constant minimizing the leverage limit variance at
/// `b = 1/2`, from a pilot configuration (the studies use pilot κ = 1):
/// `sqrt( Δn·Σ σ̂²h₁ / (T·Σ (σ̂²/3)·local-vov) )`.
pub fn optimal_kappa_hat(path: &PricePath, cfg_pilot: &EstimatorConfig) -> Result<f64, InferenceError> {
    let curve = ecf_spot_curve(path, cfg_pilot)?;
    optimal_kappa_hat_with_curve(path, cfg_pilot, &curve)
}

pub fn optimal_kappa_hat_with_curve(
    path: &PricePath,
    cfg_pilot: &EstimatorConfig,
    fwd: &[f64],
) -> Result<f64, InferenceError> {
    let n = path.n();
    let k_n = cfg_pilot.k_n;
    check_pair_range(n, k_n)?;
    let numerator = functional_over_curve(path.delta_n(), fwd, |x| {
        x * spot_noise_variance(cfg_pilot.u, x)
    });
    let mut acc = KahanSum::new();
    for i in k_n + 1..=n - k_n {
        let d = fwd[i] - fwd[i - k_n - 1];
        let h1 = spot_noise_variance(cfg_pilot.u, fwd[i]);
        acc.add(fwd[i] / 3.0 * vov_local_term(d, h1, k_n as f64));
    }
    let denominator = path.horizon() * acc.value();
    if !(denominator > 0.0) || !denominator.is_finite() {
        return Err(InferenceError::UndefinedKappa(denominator));
    }
    Ok((numerator / denominator).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestDecision {
    RejectH0,
    FailToReject,
}

/// One feasible-inference report: point estimate, standard error on the
/// estimate scale, test statistic and confidence interval.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateReport {
    pub estimator_id: EstimatorId,
    pub estimate: f64,
    pub std_error: f64,
    /// Convergence-rate factor the statistic was scaled by.
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub test_stat: f64,
    pub decision: TestDecision,
    pub alpha_level: f64,
    pub n: usize,
    pub cfg: EstimatorConfig,
    pub debias_negative: bool,
}

fn normal() -> Normal {
    Normal::new(0.0, 1.0).expect("standard normal")
}

pub fn normal_quantile(p: f64) -> f64 {
    normal().inverse_cdf(p)
}

pub fn normal_cdf(x: f64) -> f64 {
    normal().cdf(x)
}

/// Two-sided test of zero leverage effect at level `alpha_level`:
/// `T = n^{(b∧(1-b))/2}·L̂ / sqrt(avar-hat)`, rejecting when `|T|` exceeds the
/// normal quantile.
pub fn zero_leverage_test(
    path: &PricePath,
    cfg: &EstimatorConfig,
    alpha_level: f64,
) -> Result<EstimateReport, InferenceError> {
    let curve = ecf_spot_curve(path, cfg)?;
    let est = leverage_ecf_with_curve(path, cfg, &curve)?;
    let avar = leverage_avar_hat_with_curve(path, cfg, &curve)?;
    if !(avar > 0.0) || !avar.is_finite() {
        return Err(InferenceError::UndefinedVariance {
            component: "leverage avar",
            value: avar,
        });
    }
    let n = path.n() as f64;
    let rate = n.powf(cfg.b.min_with_complement() / 2.0);
    let test_stat = rate * est.value / avar.sqrt();
    let z = normal_quantile(1.0 - alpha_level / 2.0);
    let std_error = avar.sqrt() / rate;
    Ok(EstimateReport {
        estimator_id: EstimatorId::LevOur,
        estimate: est.value,
        std_error,
        rate,
        ci_low: est.value - z * std_error,
        ci_high: est.value + z * std_error,
        test_stat,
        decision: if test_stat.abs() > z {
            TestDecision::RejectH0
        } else {
            TestDecision::FailToReject
        },
        alpha_level,
        n: path.n(),
        cfg: *cfg,
        debias_negative: false,
    })
}

/// One-sided test of zero volatility of volatility at level `alpha_level`:
/// `T = n^{(1-b)/2}·V̂oV / sqrt(avar-hat)`, rejecting when `T` exceeds the
/// upper normal quantile. The report also carries a symmetric confidence
/// interval at the same level.
pub fn zero_vov_test(
    path: &PricePath,
    cfg: &EstimatorConfig,
    alpha_level: f64,
) -> Result<EstimateReport, InferenceError> {
    let curve = ecf_spot_curve(path, cfg)?;
    let est = vov_ecf_with_curve(path, cfg, &curve)?;
    let avar = vov_avar_hat_with_curve(path, cfg, &curve)?;
    if !(avar > 0.0) || !avar.is_finite() {
        return Err(InferenceError::UndefinedVariance {
            component: "vov avar",
            value: avar,
        });
    }
    let n = path.n() as f64;
    let rate = n.powf((1.0 - cfg.b.value()) / 2.0);
    let test_stat = rate * est.value / avar.sqrt();
    let z_one_sided = normal_quantile(1.0 - alpha_level);
    let z_two_sided = normal_quantile(1.0 - alpha_level / 2.0);
    let std_error = avar.sqrt() / rate;
    Ok(EstimateReport {
        estimator_id: EstimatorId::VovOur,
        estimate: est.value,
        std_error,
        rate,
        ci_low: est.value - z_two_sided * std_error,
        ci_high: est.value + z_two_sided * std_error,
        test_stat,
        decision: if test_stat > z_one_sided {
            TestDecision::RejectH0
        } else {
            TestDecision::FailToReject
        },
        alpha_level,
        n: path.n(),
        cfg: *cfg,
        debias_negative: est.debias_negative,
    })
}

/// Bundle of the plug-in variance components for reporting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VarianceComponents {
    /// `h₁(u, σ̂²_{i+})` along the forward curve.
    pub noise_var_curve: Vec<f64>,
    pub leverage_avar: f64,
    pub vov_avar: f64,
    pub terms: VovAvarTerms,
}

pub fn variance_components(
    path: &PricePath,
    cfg: &EstimatorConfig,
) -> Result<VarianceComponents, InferenceError> {
    let curve = ecf_spot_curve(path, cfg)?;
    let noise_var_curve = curve
        .iter()
        .map(|&x| spot_noise_variance(cfg.u, x))
        .collect();
    let leverage_avar = leverage_avar_hat_with_curve(path, cfg, &curve)?;
    let terms = vov_avar_terms_with_curve(path, cfg, &curve)?;
    let vov_avar = vov_avar_hat_with_curve(path, cfg, &curve)?;
    Ok(VarianceComponents {
        noise_var_curve,
        leverage_avar,
        vov_avar,
        terms,
    })
}

/// Exact limit variance of the leverage statistic evaluated on a latent
/// variance path by Riemann sum (used to benchmark sampling variances when
/// the ground truth is available).
pub fn leverage_limit_variance(
    sigma2: &[f64],
    delta_n: f64,
    u: f64,
    kappa: f64,
    b: crate::config::WindowExponent,
    vol_diffusion_sq: f64,
) -> f64 {
    let n = sigma2.len() - 1;
    let horizon = delta_n * n as f64;
    let mut noise = KahanSum::new();
    let mut vol_move = KahanSum::new();
    for &s2 in &sigma2[..n] {
        noise.add(s2 * spot_noise_variance(u, s2));
        vol_move.add(s2 * vol_move_variance(s2, vol_diffusion_sq));
    }
    let mut total = 0.0;
    if b.le_half() {
        total += 2.0 / kappa * delta_n * noise.value();
    }
    if b.ge_half() {
        total += 2.0 * kappa * horizon * delta_n * vol_move.value();
    }
    total
}

/// Exact limit variance of the VoV statistic evaluated on a latent variance
/// path by Riemann sum.
pub fn vov_limit_variance(
    sigma2: &[f64],
    delta_n: f64,
    u: f64,
    kappa: f64,
    b: crate::config::WindowExponent,
    vol_diffusion_sq: f64,
) -> f64 {
    let n = sigma2.len() - 1;
    let mut acc = KahanSum::new();
    for &s2 in &sigma2[..n] {
        let h1 = spot_noise_variance(u, s2);
        let h2 = vol_move_variance(s2, vol_diffusion_sq);
        let mut h = kappa * (837.0 / 70.0) * h2 * h2;
        if b.is_half() {
            h += 27.0 / (2.0 * kappa.powi(3)) * h1 * h1 + 709.0 / (40.0 * kappa) * h1 * h2;
        }
        acc.add(h);
    }
    delta_n * acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::WindowExponent;

    fn cfg_b(u: f64, k_n: usize, n: usize, b: WindowExponent) -> EstimatorConfig {
        EstimatorConfig::with_window(u, b, k_n, n, 10.0, 0.49).unwrap()
    }

    fn path_from_returns(returns: &[f64], delta_n: f64) -> PricePath {
        let mut prices = vec![0.0];
        for r in returns {
            prices.push(prices.last().unwrap() + r);
        }
        PricePath::new(prices, delta_n).unwrap()
    }

    fn wiggly_path(n: usize) -> PricePath {
        let returns: Vec<f64> = (0..n)
            .map(|j| 0.01 * ((2 * j + 1) as f64).sin() + 0.003 * ((j * j) as f64).cos())
            .collect();
        path_from_returns(&returns, 1e-4)
    }

    #[test]
    fn noise_variance_basics() {
        assert_eq!(spot_noise_variance(1.0, 0.0), 0.0);
        // u -> 0 limit is 2σ⁴.
        for &s2 in &[0.005, 0.02, 0.1] {
            let h = spot_noise_variance(1e-3, s2);
            let target = 2.0 * s2 * s2;
            assert!((h - target).abs() / target < 1e-5, "s2={s2}: {h} vs {target}");
        }
        // Strictly increasing in σ² on a grid.
        let mut prev = 0.0;
        for k in 1..=100 {
            let h = spot_noise_variance(1.0, k as f64 * 0.01);
            assert!(h > prev);
            prev = h;
        }
    }

    #[test]
    fn noise_variance_matches_printed_form_at_moderate_u() {
        // Direct evaluation of the printed expression, valid when u is not
        // tiny; frozen regression point at u = 1, σ² = 0.02.
        let u: f64 = 1.0;
        let s2: f64 = 0.02;
        let a = u * u * s2;
        let printed = 2.0 * ((-2.0 * a).exp() - 2.0 * (-a).exp() + 1.0) / (u.powi(4) * (-a).exp());
        let ours = spot_noise_variance(u, s2);
        assert!((ours - printed).abs() < 1e-15);
        assert!((ours - 8.000266670222248e-4).abs() < 1e-17);
    }

    #[test]
    fn vol_move_variance_cases() {
        assert_eq!(vol_move_variance(0.0, 0.7), 0.0);
        assert!((vol_move_variance(0.02, 0.01) - 4.0 * 0.02 * 0.01 / 3.0).abs() < 1e-18);
        // Square-root-diffusion mapping: s̃ = η²/4, so h₂ = η²σ²/3.
        let eta: f64 = 0.2;
        let h2 = vol_move_variance(0.02, eta * eta / 4.0);
        assert!((h2 - eta * eta * 0.02 / 3.0).abs() < 1e-18);
    }

    #[test]
    fn functional_constant_counts_grid() {
        let path = wiggly_path(50);
        let c = cfg_b(1.0, 5, 50, WindowExponent::HALF);
        let val = volatility_functional(&path, &c, |_| 1.0).unwrap();
        let expected = path.delta_n() * (50 - 5 + 1) as f64;
        assert!((val - expected).abs() < 1e-15);
    }

    #[test]
    fn indicator_branches() {
        let path = wiggly_path(80);
        let below = cfg_b(1.0, 6, 80, WindowExponent::new(2, 5).unwrap());
        let half = cfg_b(1.0, 6, 80, WindowExponent::HALF);
        let above = cfg_b(1.0, 6, 80, WindowExponent::new(3, 5).unwrap());

        // Rebuild both branch sums directly; note kappa = k_n/n^b differs
        // across the three configs even though k_n is shared.
        let curve = ecf_spot_curve(&path, &below).unwrap();
        let noise_term = functional_over_curve(path.delta_n(), &curve, |x| {
            x * spot_noise_variance(below.u, x)
        });
        let mut move_acc = KahanSum::new();
        for i in 7..=80 - 6 {
            let d = curve[i] - curve[i - 7];
            let h1 = spot_noise_variance(1.0, curve[i]);
            move_acc.add(curve[i] / 3.0 * vov_local_term(d, h1, 6.0));
        }
        let move_term = path.horizon() * move_acc.value();

        // b = 0.4: only the noise branch.
        let v_below = leverage_avar_hat(&path, &below).unwrap();
        assert!((v_below - 2.0 / below.kappa * noise_term).abs() < 1e-18);
        // b = 0.6: only the vol-move branch.
        let v_above = leverage_avar_hat(&path, &above).unwrap();
        assert!((v_above - 2.0 * above.kappa * move_term).abs() < 1e-13 * v_above.abs().max(1.0));
        // b = 1/2: both branches, each at the b = 1/2 kappa.
        let v_half = leverage_avar_hat(&path, &half).unwrap();
        let expected = 2.0 / half.kappa * noise_term + 2.0 * half.kappa * move_term;
        assert!((v_half - expected).abs() < 1e-13 * v_half.abs().max(1.0));

        // VoV avar: quartic branch always on, the other two only at b = 1/2.
        let terms = vov_avar_terms(&path, &half).unwrap();
        let w_above = vov_avar_hat(&path, &above).unwrap();
        let expected_above = above.kappa * (279.0 / 70.0 * terms.quartic);
        assert!((w_above - expected_above).abs() < 1e-15 * w_above.abs().max(1.0));
        let w_half = vov_avar_hat(&path, &half).unwrap();
        let expected_half = half.kappa
            * (891.0 / 35.0 * terms.noise_sq
                + 38207.0 / 1400.0 * terms.cross
                + 279.0 / 70.0 * terms.quartic);
        assert!((w_half - expected_half).abs() < 1e-16 * w_half.abs().max(1.0));
    }

    #[test]
    fn zero_returns_kill_all_plugins() {
        let path = path_from_returns(&[0.0; 40], 1e-4);
        let c = cfg_b(1.0, 4, 40, WindowExponent::HALF);
        assert_eq!(leverage_avar_hat(&path, &c).unwrap(), 0.0);
        let terms = vov_avar_terms(&path, &c).unwrap();
        assert_eq!(terms.noise_sq, 0.0);
        assert_eq!(terms.cross, 0.0);
        assert_eq!(terms.quartic, 0.0);
        assert_eq!(vov_avar_hat(&path, &c).unwrap(), 0.0);
        assert_eq!(spot_avar_noise_hat(&path, 0, &c).unwrap(), 0.0);
        assert_eq!(spot_avar_move_hat(&path, 10, &c).unwrap(), 0.0);
        // Degenerate variance -> both tests surface errors instead of NaN.
        assert!(matches!(
            zero_leverage_test(&path, &c, 0.05),
            Err(InferenceError::UndefinedVariance { .. })
        ));
        assert!(matches!(
            zero_vov_test(&path, &c, 0.05),
            Err(InferenceError::UndefinedVariance { .. })
        ));
    }

    #[test]
    fn nonneg_terms_on_random_inputs() {
        // H1, H3 and the pointwise noise plug-in are sums of even powers.
        let mut state = 88172645463325252u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state as f64 / u64::MAX as f64 - 0.5) * 0.06
        };
        for _ in 0..200 {
            let returns: Vec<f64> = (0..36).map(|_| next()).collect();
            let path = path_from_returns(&returns, 1e-4);
            let c = cfg_b(1.0, 3, 36, WindowExponent::HALF);
            let terms = vov_avar_terms(&path, &c).unwrap();
            assert!(terms.noise_sq >= 0.0);
            assert!(terms.quartic >= 0.0);
            assert!(spot_avar_noise_hat(&path, 5, &c).unwrap() >= 0.0);
        }
    }

    #[test]
    fn kappa_opt_unit_when_components_balance() {
        // The estimate is sqrt(num/den); probing the balanced case directly.
        let num = 3.7e-5;
        let den = 3.7e-5;
        assert_eq!((num / den as f64).sqrt(), 1.0);
        // And on a real path the estimate is positive and finite whenever the
        // denominator is positive.
        let path = wiggly_path(120);
        let c = cfg_b(1.0, 8, 120, WindowExponent::HALF);
        match optimal_kappa_hat(&path, &c) {
            Ok(k) => assert!(k.is_finite() && k > 0.0),
            Err(InferenceError::UndefinedKappa(d)) => assert!(d <= 0.0),
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn local_window_bounds() {
        let path = wiggly_path(60);
        let c = cfg_b(1.0, 6, 60, WindowExponent::HALF);
        assert!(spot_avar_move_hat(&path, 5, &c).is_err());
        assert!(spot_avar_move_hat(&path, 6, &c).is_ok());
        assert!(spot_avar_move_hat(&path, 48, &c).is_ok());
        assert!(spot_avar_move_hat(&path, 49, &c).is_err());
    }

    #[test]
    fn report_interval_brackets_estimate() {
        let path = wiggly_path(200);
        let c = cfg_b(1.0, 9, 200, WindowExponent::HALF);
        let rep = zero_leverage_test(&path, &c, 0.05).unwrap();
        assert!(rep.ci_low <= rep.estimate && rep.estimate <= rep.ci_high);
        assert!(rep.std_error >= 0.0);
        let z = normal_quantile(0.975);
        let expected = if rep.test_stat.abs() > z {
            TestDecision::RejectH0
        } else {
            TestDecision::FailToReject
        };
        assert_eq!(rep.decision, expected);
    }
}
