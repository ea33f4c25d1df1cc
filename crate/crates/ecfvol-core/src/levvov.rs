//! Integrated leverage-effect and volatility-of-volatility estimators,
//! together with the comparison baselines from the literature.
//!
//! The headline pair plugs the characteristic-function spot estimates into
//! the quadratic-(co)variation definitions:
//!
//! ```text
//! L̂    = Σ_{i=k_n+1}^{n-k_n} Δ_i X · (σ̂²_{i+} − σ̂²_{i-}),
//! V̂oV  = Σ_{i=k_n+1}^{n-k_n} [ (3/(2k_n))(σ̂²_{i+} − σ̂²_{i-})² − (3/k_n²)·h₁(u, σ̂²_{i+}) ],
//! ```
//!
//! where `h₁` is the conditional noise variance of the spot estimate; the
//! second term removes the noise bias of the squared difference. Taking the
//! forward/backward difference also cancels the common small-jump bias of the
//! two spot estimates, so no explicit jump-bias correction is applied. The
//! de-biased V̂oV can come out negative in finite samples; it is returned raw
//! with a flag rather than floored, so sampling distributions stay intact.
//!
//! Baselines (`Lev-WM14`, `Lev-AJ14`, `Lev-AFLWY17`, `Vov-AJ14`, `Vov-V15`,
//! `Vov-V15-thr`, `Vov-BV09`) follow their printed formulas, built on the
//! plain/thresholded local estimators from [`crate::spot`] and sharing the
//! same compensated-summation policy as the headline estimators.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::EstimatorConfig;
use crate::inference::{spot_noise_variance, vov_local_term};
use crate::numerics::KahanSum;
use crate::path::PricePath;
use crate::spot::{
    ecf_spot_curve, fourth_moment_curve, plain_spot_curve, truncated_spot_curve, SpotError,
};

#[derive(Debug, Error)]
pub enum EstimateError {
    #[error("path too short for k_n={k_n}: need n >= {needed}, got {n}")]
    PathTooShort { needed: usize, n: usize, k_n: usize },
    #[error(transparent)]
    Spot(#[from] SpotError),
    #[error("estimate undefined: {component} = {value}")]
    Undefined { component: &'static str, value: f64 },
}

/// Which estimator produced a value; display strings follow the comparison
/// tables' labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimatorId {
    LevOur,
    LevAJ14,
    LevWM14,
    LevAFLWY17,
    LevCor,
    LevFunc,
    VovOur,
    VovAJ14,
    VovV15,
    VovV15Thr,
    VovBV09,
}

impl EstimatorId {
    pub fn label(&self) -> &'static str {
        match self {
            EstimatorId::LevOur => "Lev-our",
            EstimatorId::LevAJ14 => "Lev-AJ14",
            EstimatorId::LevWM14 => "Lev-WM14",
            EstimatorId::LevAFLWY17 => "Lev-AFLWY17",
            EstimatorId::LevCor => "Lev-cor",
            EstimatorId::LevFunc => "Lev-func",
            EstimatorId::VovOur => "Vov-our",
            EstimatorId::VovAJ14 => "Vov-AJ14",
            EstimatorId::VovV15 => "Vov-V15",
            EstimatorId::VovV15Thr => "Vov-V15-thr",
            EstimatorId::VovBV09 => "Vov-BV09",
        }
    }

    /// True when the estimator targets the leverage effect (as opposed to
    /// volatility of volatility).
    pub fn is_leverage(&self) -> bool {
        matches!(
            self,
            EstimatorId::LevOur
                | EstimatorId::LevAJ14
                | EstimatorId::LevWM14
                | EstimatorId::LevAFLWY17
                | EstimatorId::LevCor
                | EstimatorId::LevFunc
        )
    }
}

impl std::fmt::Display for EstimatorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A point estimate with its provenance; the config is echoed verbatim so a
/// report can be reproduced from the serialized record alone.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevVovEstimate {
    pub value: f64,
    pub estimator_id: EstimatorId,
    pub cfg: EstimatorConfig,
    pub n: usize,
    /// Set when a de-biased estimator produced a negative value.
    pub debias_negative: bool,
}

fn check_len(n: usize, needed: usize, k_n: usize) -> Result<(), EstimateError> {
    if n < needed {
        return Err(EstimateError::PathTooShort { needed, n, k_n });
    }
    Ok(())
}

fn finish(
    value: f64,
    estimator_id: EstimatorId,
    cfg: &EstimatorConfig,
    n: usize,
) -> Result<LevVovEstimate, EstimateError> {
    if !value.is_finite() {
        return Err(EstimateError::Undefined {
            component: estimator_id.label(),
            value,
        });
    }
    Ok(LevVovEstimate {
        value,
        estimator_id,
        cfg: *cfg,
        n,
        debias_negative: false,
    })
}

/// Leverage effect `⟨X, σ²⟩` via characteristic-function spot estimates.
pub fn leverage_ecf(path: &PricePath, cfg: &EstimatorConfig) -> Result<LevVovEstimate, EstimateError> {
    let curve = ecf_spot_curve(path, cfg)?;
    leverage_ecf_with_curve(path, cfg, &curve)
}

/// Same as [`leverage_ecf`] but reusing a precomputed forward curve.
pub fn leverage_ecf_with_curve(
    path: &PricePath,
    cfg: &EstimatorConfig,
    fwd: &[f64],
) -> Result<LevVovEstimate, EstimateError> {
    let est = leverage_functional_with_curve(path, cfg, fwd, |x| x)?;
    Ok(LevVovEstimate {
        estimator_id: EstimatorId::LevOur,
        ..est
    })
}

/// Leverage of a transformed variance, `⟨X, F(σ²)⟩`.
///
/// `F` should be C² and monotone on the estimator's range
/// `[0, ln(k_n)/u²]`; with `F = identity` this coincides with
/// [`leverage_ecf`] term by term.
pub fn leverage_functional<F: Fn(f64) -> f64>(
    path: &PricePath,
    cfg: &EstimatorConfig,
    f: F,
) -> Result<LevVovEstimate, EstimateError> {
    let curve = ecf_spot_curve(path, cfg)?;
    leverage_functional_with_curve(path, cfg, &curve, f)
}

pub fn leverage_functional_with_curve<F: Fn(f64) -> f64>(
    path: &PricePath,
    cfg: &EstimatorConfig,
    fwd: &[f64],
    f: F,
) -> Result<LevVovEstimate, EstimateError> {
    let n = path.n();
    let k_n = cfg.k_n;
    check_len(n, 2 * k_n + 2, k_n)?;
    let returns = path.returns();
    let mut acc = KahanSum::new();
    for i in k_n + 1..=n - k_n {
        let fwd_i = f(fwd[i]);
        let bwd_i = f(fwd[i - k_n - 1]);
        acc.add(returns[i - 1] * (fwd_i - bwd_i));
    }
    finish(acc.value(), EstimatorId::LevFunc, cfg, n)
}

/// Integrated volatility of volatility `⟨σ², σ²⟩` with the noise de-bias.
pub fn vov_ecf(path: &PricePath, cfg: &EstimatorConfig) -> Result<LevVovEstimate, EstimateError> {
    let curve = ecf_spot_curve(path, cfg)?;
    vov_ecf_with_curve(path, cfg, &curve)
}

pub fn vov_ecf_with_curve(
    path: &PricePath,
    cfg: &EstimatorConfig,
    fwd: &[f64],
) -> Result<LevVovEstimate, EstimateError> {
    let n = path.n();
    let k_n = cfg.k_n;
    check_len(n, 2 * k_n + 2, k_n)?;
    let mut acc = KahanSum::new();
    for i in k_n + 1..=n - k_n {
        let d = fwd[i] - fwd[i - k_n - 1];
        let h1 = spot_noise_variance(cfg.u, fwd[i]);
        acc.add(vov_local_term(d, h1, k_n as f64));
    }
    let mut est = finish(acc.value(), EstimatorId::VovOur, cfg, n)?;
    est.debias_negative = est.value < 0.0;
    Ok(est)
}

/// Leverage effect on the correlation scale,
/// `L̂ / sqrt(ÎV · V̂oV)` with `ÎV` the Riemann-sum volatility functional of
/// the identity. Undefined (error) when either denominator piece is not
/// strictly positive; the raw ratio is stored unclamped.
pub fn leverage_correlation(
    path: &PricePath,
    cfg: &EstimatorConfig,
) -> Result<LevVovEstimate, EstimateError> {
    let curve = ecf_spot_curve(path, cfg)?;
    let lev = leverage_ecf_with_curve(path, cfg, &curve)?;
    let vov = vov_ecf_with_curve(path, cfg, &curve)?;
    let iv = integrated_variance_over(path.delta_n(), &curve);
    if !(vov.value > 0.0) {
        return Err(EstimateError::Undefined {
            component: "vov",
            value: vov.value,
        });
    }
    if !(iv > 0.0) {
        return Err(EstimateError::Undefined {
            component: "integrated volatility",
            value: iv,
        });
    }
    finish(
        lev.value / (iv.sqrt() * vov.value.sqrt()),
        EstimatorId::LevCor,
        cfg,
        path.n(),
    )
}

fn integrated_variance_over(delta_n: f64, fwd: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for &v in fwd {
        acc.add(v);
    }
    delta_n * acc.value()
}

/// Non-overlapping-window baseline: increments and forward spot estimates on
/// blocks `τ_j = t_{j·k_n}`.
pub fn leverage_wm14(path: &PricePath, cfg: &EstimatorConfig) -> Result<LevVovEstimate, EstimateError> {
    let n = path.n();
    let k_n = cfg.k_n;
    let blocks = n / k_n;
    if blocks < 2 {
        return Err(EstimateError::PathTooShort {
            needed: 2 * k_n,
            n,
            k_n,
        });
    }
    let con = plain_spot_curve(path, cfg)?;
    let prices = path.log_prices();
    let mut acc = KahanSum::new();
    for j in 0..=blocks - 2 {
        let lo = j * k_n;
        let hi = (j + 1) * k_n;
        acc.add((prices[hi] - prices[lo]) * (con[hi] - con[lo]));
    }
    finish(2.0 * acc.value(), EstimatorId::LevWM14, cfg, n)
}

/// Overlapping-window baseline built on plain local realized variance.
pub fn leverage_aj14(path: &PricePath, cfg: &EstimatorConfig) -> Result<LevVovEstimate, EstimateError> {
    let n = path.n();
    let k_n = cfg.k_n;
    check_len(n, 2 * k_n, k_n)?;
    let con = plain_spot_curve(path, cfg)?;
    let prices = path.log_prices();
    let mut acc = KahanSum::new();
    for i in 1..=n - 2 * k_n + 1 {
        acc.add(
            (prices[i + 2 * k_n - 1] - prices[i - 1]) * (con[i + k_n - 1] - con[i - 1]),
        );
    }
    finish(acc.value() / k_n as f64, EstimatorId::LevAJ14, cfg, n)
}

/// Threshold baseline: truncated spot estimates and a truncated increment.
pub fn leverage_aflwy17(
    path: &PricePath,
    cfg: &EstimatorConfig,
) -> Result<LevVovEstimate, EstimateError> {
    let n = path.n();
    let k_n = cfg.k_n;
    check_len(n, 2 * k_n + 2, k_n)?;
    let thr = truncated_spot_curve(path, cfg)?;
    let level = cfg.truncation_level(path.delta_n());
    let returns = path.returns();
    let mut acc = KahanSum::new();
    for i in k_n + 1..=n - k_n {
        let r = returns[i - 1];
        if r.abs() > level {
            continue;
        }
        acc.add(r * (thr[i] - thr[i - k_n - 1]));
    }
    finish(acc.value(), EstimatorId::LevAFLWY17, cfg, n)
}

/// VoV baseline de-biased with the squared plain spot estimate.
pub fn vov_aj14(path: &PricePath, cfg: &EstimatorConfig) -> Result<LevVovEstimate, EstimateError> {
    let n = path.n();
    let k_n = cfg.k_n;
    check_len(n, 2 * k_n, k_n)?;
    let con = plain_spot_curve(path, cfg)?;
    let k = k_n as f64;
    let mut acc = KahanSum::new();
    for i in 0..=n - 2 * k_n {
        let d = con[i + k_n] - con[i];
        acc.add(d * d - (4.0 / k) * con[i] * con[i]);
    }
    let mut est = finish(3.0 / (2.0 * k) * acc.value(), EstimatorId::VovAJ14, cfg, n)?;
    est.debias_negative = est.value < 0.0;
    Ok(est)
}

/// VoV baseline de-biased with the local fourth moment; `truncated` switches
/// both the spot estimates and the fourth moment to their thresholded forms.
pub fn vov_v15(
    path: &PricePath,
    cfg: &EstimatorConfig,
    truncated: bool,
) -> Result<LevVovEstimate, EstimateError> {
    let n = path.n();
    let k_n = cfg.k_n;
    check_len(n, 2 * k_n, k_n)?;
    let spot = if truncated {
        truncated_spot_curve(path, cfg)?
    } else {
        plain_spot_curve(path, cfg)?
    };
    let fourth = fourth_moment_curve(path, cfg, truncated)?;
    let k = k_n as f64;
    let mut acc = KahanSum::new();
    for i in 0..=n - 2 * k_n {
        let d = spot[i + k_n] - spot[i];
        acc.add(3.0 / (2.0 * k) * d * d - 6.0 / (k * k) * fourth[i]);
    }
    let id = if truncated {
        EstimatorId::VovV15Thr
    } else {
        EstimatorId::VovV15
    };
    let mut est = finish(acc.value(), id, cfg, n)?;
    est.debias_negative = est.value < 0.0;
    Ok(est)
}

/// VoV baseline summing squared one-step differences of thresholded spot
/// estimates. The last root is dropped so every forward window stays inside
/// the sample.
pub fn vov_bv09(path: &PricePath, cfg: &EstimatorConfig) -> Result<LevVovEstimate, EstimateError> {
    let n = path.n();
    let k_n = cfg.k_n;
    check_len(n, k_n + 1, k_n)?;
    let thr = truncated_spot_curve(path, cfg)?;
    let mut acc = KahanSum::new();
    for i in 0..n - k_n {
        let d = thr[i + 1] - thr[i];
        acc.add(d * d);
    }
    finish(acc.value(), EstimatorId::VovBV09, cfg, n)
}

/// Dispatches one of the directly computable estimators by id.
///
/// `LevFunc` is excluded (it needs a caller-supplied transform).
pub fn estimate_by_id(
    id: EstimatorId,
    path: &PricePath,
    cfg: &EstimatorConfig,
) -> Result<LevVovEstimate, EstimateError> {
    match id {
        EstimatorId::LevOur => leverage_ecf(path, cfg),
        EstimatorId::LevAJ14 => leverage_aj14(path, cfg),
        EstimatorId::LevWM14 => leverage_wm14(path, cfg),
        EstimatorId::LevAFLWY17 => leverage_aflwy17(path, cfg),
        EstimatorId::LevCor => leverage_correlation(path, cfg),
        EstimatorId::LevFunc => Err(EstimateError::Undefined {
            component: "Lev-func requires an explicit transform",
            value: f64::NAN,
        }),
        EstimatorId::VovOur => vov_ecf(path, cfg),
        EstimatorId::VovAJ14 => vov_aj14(path, cfg),
        EstimatorId::VovV15 => vov_v15(path, cfg, false),
        EstimatorId::VovV15Thr => vov_v15(path, cfg, true),
        EstimatorId::VovBV09 => vov_bv09(path, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::WindowExponent;

    fn cfg(u: f64, k_n: usize, n: usize) -> EstimatorConfig {
        EstimatorConfig::with_window(u, WindowExponent::HALF, k_n, n, 10.0, 0.49).unwrap()
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
            .map(|j| 0.01 * ((j * j + 3) as f64).sin() + 0.002 * (j as f64).cos())
            .collect();
        path_from_returns(&returns, 1e-4)
    }

    #[test]
    fn zero_returns_zero_estimates() {
        let path = path_from_returns(&[0.0; 30], 1e-4);
        let c = cfg(1.0, 4, 30);
        assert_eq!(leverage_ecf(&path, &c).unwrap().value, 0.0);
        assert_eq!(vov_ecf(&path, &c).unwrap().value, 0.0);
        assert_eq!(leverage_aj14(&path, &c).unwrap().value, 0.0);
        assert_eq!(leverage_wm14(&path, &c).unwrap().value, 0.0);
        assert_eq!(leverage_aflwy17(&path, &c).unwrap().value, 0.0);
        assert_eq!(vov_aj14(&path, &c).unwrap().value, 0.0);
        assert_eq!(vov_v15(&path, &c, false).unwrap().value, 0.0);
        assert_eq!(vov_v15(&path, &c, true).unwrap().value, 0.0);
        assert_eq!(vov_bv09(&path, &c).unwrap().value, 0.0);
    }

    #[test]
    fn functional_identity_matches_leverage_bitwise() {
        let path = wiggly_path(60);
        let c = cfg(1.0, 6, 60);
        let lev = leverage_ecf(&path, &c).unwrap();
        let func = leverage_functional(&path, &c, |x| x).unwrap();
        assert_eq!(lev.value.to_bits(), func.value.to_bits());
        assert_eq!(lev.estimator_id, EstimatorId::LevOur);
        assert_eq!(func.estimator_id, EstimatorId::LevFunc);
    }

    #[test]
    fn functional_constant_is_zero() {
        let path = wiggly_path(60);
        let c = cfg(1.0, 6, 60);
        assert_eq!(leverage_functional(&path, &c, |_| 3.7).unwrap().value, 0.0);
    }

    #[test]
    fn sign_symmetry_under_return_negation() {
        let path = wiggly_path(80);
        let negated = path_from_returns(
            &path.returns().iter().map(|r| -r).collect::<Vec<_>>(),
            path.delta_n(),
        );
        let c = cfg(1.0, 7, 80);
        let lev_a = leverage_ecf(&path, &c).unwrap().value;
        let lev_b = leverage_ecf(&negated, &c).unwrap().value;
        assert_eq!(lev_a.to_bits(), (-lev_b).to_bits());
        let vov_a = vov_ecf(&path, &c).unwrap().value;
        let vov_b = vov_ecf(&negated, &c).unwrap().value;
        assert_eq!(vov_a.to_bits(), vov_b.to_bits());
    }

    #[test]
    fn shift_invariance() {
        let path = wiggly_path(80);
        let shifted = PricePath::new(
            path.log_prices().iter().map(|x| x + 123.456).collect(),
            path.delta_n(),
        )
        .unwrap();
        let c = cfg(1.0, 7, 80);
        for id in [
            EstimatorId::LevOur,
            EstimatorId::LevAJ14,
            EstimatorId::LevWM14,
            EstimatorId::LevAFLWY17,
            EstimatorId::VovOur,
            EstimatorId::VovAJ14,
            EstimatorId::VovV15,
            EstimatorId::VovV15Thr,
            EstimatorId::VovBV09,
        ] {
            let a = estimate_by_id(id, &path, &c).unwrap().value;
            let b = estimate_by_id(id, &shifted, &c).unwrap().value;
            assert!(
                (a - b).abs() <= 1e-12 * a.abs().max(1.0),
                "{id}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn short_path_rejected() {
        // A config sized for a longer path applied to a shorter one.
        let c = cfg(1.0, 5, 30);
        let path = path_from_returns(&[0.01; 11], 1e-4);
        assert!(matches!(
            leverage_ecf(&path, &c),
            Err(EstimateError::PathTooShort { .. })
        ));
        assert!(matches!(
            vov_ecf(&path, &c),
            Err(EstimateError::PathTooShort { .. })
        ));
    }

    #[test]
    fn correlation_undefined_on_degenerate_path() {
        // Flat path: VoV estimate 0 -> denominator undefined.
        let path = path_from_returns(&[0.0; 40], 1e-4);
        let c = cfg(1.0, 4, 40);
        assert!(matches!(
            leverage_correlation(&path, &c),
            Err(EstimateError::Undefined { .. })
        ));
    }

    #[test]
    fn correlation_zero_numerator() {
        // Returns vanish on the summation range i = k_n+1..=n-k_n (so the
        // leverage numerator is exactly 0) while the edge returns keep the
        // variance pieces strictly positive.
        let mut returns = vec![0.0; 16];
        for (j, r) in [0.02, -0.015, 0.01].into_iter().enumerate() {
            returns[j] = r;
        }
        for (j, r) in [0.018, -0.012, 0.016].into_iter().enumerate() {
            returns[13 + j] = r;
        }
        let path = path_from_returns(&returns, 1e-4);
        let c = cfg(1.0, 3, 16);
        assert_eq!(leverage_ecf(&path, &c).unwrap().value, 0.0);
        let cor = leverage_correlation(&path, &c).unwrap();
        assert_eq!(cor.value, 0.0);
        assert_eq!(cor.estimator_id, EstimatorId::LevCor);
    }
}
