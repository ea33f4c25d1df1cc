//! Local spot-variance estimators.
//!
//! The headline estimator averages `cos(u·ΔX/√Δn)` over a local window and
//! inverts the Gaussian characteristic function:
//!
//! ```text
//! σ̂²_{i±} = (-2/u²)·ln( max( (1/k_n)·Σ_{j∈window} cos(u·Δ_j X/√Δn), 1/√k_n ) ).
//! ```
//!
//! Because the cosine is bounded, jump contributions stay controlled even at
//! infinite variation; the `1/√k_n` floor keeps the logarithm defined and
//! caps the output at `ln(k_n)/u²`. Alongside it live the classical local
//! estimators used as comparison baselines: plain realized variance,
//! thresholded realized variance, bipower variation and the local fourth
//! moment.
//!
//! Window conventions for grid index `i` (increments are 1-based `Δ_j X`):
//! forward uses `j ∈ {i+1, …, i+k_n}`, backward uses `j ∈ {i-k_n, …, i-1}`,
//! so the backward estimate at `i` coincides with the forward estimate rooted
//! at `i-k_n-1`, summed in the same order. Indices outside the admissible
//! range are hard errors, never clamped.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::EstimatorConfig;
use crate::numerics::KahanSum;
use crate::path::PricePath;

#[derive(Debug, Error)]
pub enum SpotError {
    #[error("{direction:?} window at i={i} out of range (k_n={k_n}, n={n})")]
    WindowOutOfRange {
        direction: Direction,
        i: usize,
        k_n: usize,
        n: usize,
    },
    #[error("path too short: need n >= {needed}, got {n}")]
    PathTooShort { needed: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

#[inline]
fn check_forward(i: usize, k_n: usize, n: usize) -> Result<(), SpotError> {
    if i + k_n > n {
        return Err(SpotError::WindowOutOfRange {
            direction: Direction::Forward,
            i,
            k_n,
            n,
        });
    }
    Ok(())
}

#[inline]
fn check_backward(i: usize, k_n: usize, n: usize) -> Result<(), SpotError> {
    if i < k_n + 1 || i > n {
        return Err(SpotError::WindowOutOfRange {
            direction: Direction::Backward,
            i,
            k_n,
            n,
        });
    }
    Ok(())
}

/// Index of the first increment (0-based into `returns`) of a window.
#[inline]
fn window_start(i: usize, direction: Direction, k_n: usize) -> usize {
    match direction {
        Direction::Forward => i,
        Direction::Backward => i - k_n - 1,
    }
}

#[inline]
fn ecf_invert(cos_avg: f64, u: f64, k_n: usize) -> f64 {
    let floor = 1.0 / (k_n as f64).sqrt();
    if cos_avg <= floor {
        // Exact floor value ln(k_n)/u².
        (k_n as f64).ln() / (u * u)
    } else {
        -2.0 * cos_avg.ln() / (u * u)
    }
}

#[inline]
fn ecf_window(scaled_cos: &[f64], u: f64, k_n: usize) -> f64 {
    let mut acc = KahanSum::new();
    for &c in scaled_cos {
        acc.add(c);
    }
    ecf_invert(acc.value() / k_n as f64, u, k_n)
}

/// `cos(u·Δ_j X/√Δn)` for every increment, evaluated once.
fn cos_cache(path: &PricePath, u: f64) -> Vec<f64> {
    let scale = u / path.delta_n().sqrt();
    path.returns().iter().map(|&r| (scale * r).cos()).collect()
}

/// Characteristic-function spot estimate over the forward window at `i`.
pub fn ecf_spot_forward(path: &PricePath, i: usize, cfg: &EstimatorConfig) -> Result<f64, SpotError> {
    check_forward(i, cfg.k_n, path.n())?;
    let scale = cfg.u / path.delta_n().sqrt();
    let mut acc = KahanSum::new();
    for &r in &path.returns()[i..i + cfg.k_n] {
        acc.add((scale * r).cos());
    }
    Ok(ecf_invert(acc.value() / cfg.k_n as f64, cfg.u, cfg.k_n))
}

/// Characteristic-function spot estimate over the backward window at `i`.
pub fn ecf_spot_backward(path: &PricePath, i: usize, cfg: &EstimatorConfig) -> Result<f64, SpotError> {
    check_backward(i, cfg.k_n, path.n())?;
    ecf_spot_forward(path, i - cfg.k_n - 1, cfg)
}

/// Forward estimates for every admissible root `i = 0..=n-k_n`.
///
/// The backward estimate at `i` is `curve[i - k_n - 1]`.
pub fn ecf_spot_curve(path: &PricePath, cfg: &EstimatorConfig) -> Result<Vec<f64>, SpotError> {
    let n = path.n();
    let k_n = cfg.k_n;
    if n < k_n {
        return Err(SpotError::PathTooShort { needed: k_n, n });
    }
    let cache = cos_cache(path, cfg.u);
    Ok((0..=n - k_n)
        .map(|i| ecf_window(&cache[i..i + k_n], cfg.u, k_n))
        .collect())
}

#[inline]
fn realized_window(
    returns: &[f64],
    start: usize,
    k_n: usize,
    delta_n: f64,
    threshold: Option<f64>,
) -> f64 {
    let mut acc = KahanSum::new();
    for &r in &returns[start..start + k_n] {
        match threshold {
            Some(level) if r.abs() > level => {}
            _ => acc.add(r * r),
        }
    }
    acc.value() / (k_n as f64 * delta_n)
}

/// Local realized variance (no jump filtering).
pub fn plain_spot(
    path: &PricePath,
    i: usize,
    cfg: &EstimatorConfig,
    direction: Direction,
) -> Result<f64, SpotError> {
    match direction {
        Direction::Forward => check_forward(i, cfg.k_n, path.n())?,
        Direction::Backward => check_backward(i, cfg.k_n, path.n())?,
    }
    let start = window_start(i, direction, cfg.k_n);
    Ok(realized_window(
        path.returns(),
        start,
        cfg.k_n,
        path.delta_n(),
        None,
    ))
}

/// Local realized variance keeping only increments with
/// `|ΔX| <= alpha·Δn^omega`.
pub fn truncated_spot(
    path: &PricePath,
    i: usize,
    cfg: &EstimatorConfig,
    direction: Direction,
) -> Result<f64, SpotError> {
    match direction {
        Direction::Forward => check_forward(i, cfg.k_n, path.n())?,
        Direction::Backward => check_backward(i, cfg.k_n, path.n())?,
    }
    let start = window_start(i, direction, cfg.k_n);
    Ok(realized_window(
        path.returns(),
        start,
        cfg.k_n,
        path.delta_n(),
        Some(cfg.truncation_level(path.delta_n())),
    ))
}

/// Forward plain-realized-variance curve for roots `0..=n-k_n`.
pub fn plain_spot_curve(path: &PricePath, cfg: &EstimatorConfig) -> Result<Vec<f64>, SpotError> {
    spot_curve_impl(path, cfg, None)
}

/// Forward thresholded curve for roots `0..=n-k_n`.
pub fn truncated_spot_curve(path: &PricePath, cfg: &EstimatorConfig) -> Result<Vec<f64>, SpotError> {
    spot_curve_impl(path, cfg, Some(cfg.truncation_level(path.delta_n())))
}

fn spot_curve_impl(
    path: &PricePath,
    cfg: &EstimatorConfig,
    threshold: Option<f64>,
) -> Result<Vec<f64>, SpotError> {
    let n = path.n();
    let k_n = cfg.k_n;
    if n < k_n {
        return Err(SpotError::PathTooShort { needed: k_n, n });
    }
    Ok((0..=n - k_n)
        .map(|i| realized_window(path.returns(), i, k_n, path.delta_n(), threshold))
        .collect())
}

/// Local fourth-moment estimate `(1/(3 k_n Δn²))·Σ_{j=1..k_n} |Δ_{i+j} X|⁴`
/// over the forward window; `truncated` applies the `alpha·Δn^omega`
/// indicator to each increment.
pub fn fourth_moment(
    path: &PricePath,
    i: usize,
    cfg: &EstimatorConfig,
    truncated: bool,
) -> Result<f64, SpotError> {
    check_forward(i, cfg.k_n, path.n())?;
    let level = cfg.truncation_level(path.delta_n());
    let mut acc = KahanSum::new();
    for &r in &path.returns()[i..i + cfg.k_n] {
        if truncated && r.abs() > level {
            continue;
        }
        let r2 = r * r;
        acc.add(r2 * r2);
    }
    Ok(acc.value() / (3.0 * cfg.k_n as f64 * path.delta_n() * path.delta_n()))
}

/// Forward fourth-moment curve for roots `0..=n-k_n`.
pub fn fourth_moment_curve(
    path: &PricePath,
    cfg: &EstimatorConfig,
    truncated: bool,
) -> Result<Vec<f64>, SpotError> {
    let n = path.n();
    if n < cfg.k_n {
        return Err(SpotError::PathTooShort { needed: cfg.k_n, n });
    }
    Ok((0..=n - cfg.k_n)
        .map(|i| fourth_moment(path, i, cfg, truncated).expect("range checked"))
        .collect())
}

/// Bipower variation `BV_n = (π/2)·Σ_{i=1..n-1} |Δ_i X|·|Δ_{i+1} X|`.
pub fn bipower_variation(path: &PricePath) -> f64 {
    let returns = path.returns();
    let mut acc = KahanSum::new();
    for w in returns.windows(2) {
        acc.add(w[0].abs() * w[1].abs());
    }
    std::f64::consts::FRAC_PI_2 * acc.value()
}

/// Upper bound `ln(k_n)/u²` implied by the floor.
pub fn ecf_upper_bound(cfg: &EstimatorConfig) -> f64 {
    (cfg.k_n as f64).ln() / (cfg.u * cfg.u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::WindowExponent;

    fn cfg(u: f64, k_n: usize, n: usize) -> EstimatorConfig {
        EstimatorConfig::with_window(u, WindowExponent::HALF, k_n, n, 0.7, 0.49).unwrap()
    }

    fn path_from_returns(returns: &[f64], delta_n: f64) -> PricePath {
        let mut prices = vec![0.0];
        for r in returns {
            prices.push(prices.last().unwrap() + r);
        }
        PricePath::new(prices, delta_n).unwrap()
    }

    #[test]
    fn zero_returns_give_zero_everywhere() {
        let path = path_from_returns(&[0.0; 24], 1e-4);
        let c = cfg(1.0, 4, 24);
        assert_eq!(ecf_spot_forward(&path, 0, &c).unwrap(), 0.0);
        assert_eq!(ecf_spot_backward(&path, 24, &c).unwrap(), 0.0);
        assert_eq!(plain_spot(&path, 0, &c, Direction::Forward).unwrap(), 0.0);
        assert_eq!(truncated_spot(&path, 0, &c, Direction::Forward).unwrap(), 0.0);
        assert_eq!(fourth_moment(&path, 0, &c, false).unwrap(), 0.0);
        assert_eq!(bipower_variation(&path), 0.0);
    }

    #[test]
    fn floor_is_exact() {
        // Returns sized so every scaled increment is u·ΔX/√Δn = π: the cosine
        // average is -1, the floor binds, and the output is exactly ln(k_n)/u².
        for u in [1.0, 2.0] {
            let r = std::f64::consts::PI * (1e-4f64).sqrt() / u;
            let path = path_from_returns(&vec![r; 210], 1e-4);
            let c = cfg(u, 100, 210);
            let est = ecf_spot_forward(&path, 0, &c).unwrap();
            assert_eq!(est, (100f64).ln() / (u * u));
        }
    }

    #[test]
    fn backward_equals_forward_shifted_bitwise() {
        let returns: Vec<f64> = (0..40).map(|j| ((j * j) as f64).sin() * 0.01).collect();
        let path = path_from_returns(&returns, 1e-4);
        let c = cfg(1.0, 7, 40);
        for i in 8..=40 {
            let b = ecf_spot_backward(&path, i, &c).unwrap();
            let f = ecf_spot_forward(&path, i - 8, &c).unwrap();
            assert_eq!(b.to_bits(), f.to_bits());
        }
    }

    #[test]
    fn curve_matches_single_shot_bitwise() {
        let returns: Vec<f64> = (0..60).map(|j| (j as f64 * 0.37).cos() * 0.02).collect();
        let path = path_from_returns(&returns, 1e-4);
        let c = cfg(1.3, 9, 60);
        let curve = ecf_spot_curve(&path, &c).unwrap();
        for (i, &v) in curve.iter().enumerate() {
            assert_eq!(v.to_bits(), ecf_spot_forward(&path, i, &c).unwrap().to_bits());
        }
    }

    #[test]
    fn window_bounds_are_hard_errors() {
        let path = path_from_returns(&[0.01; 20], 1e-4);
        let c = cfg(1.0, 5, 20);
        assert!(ecf_spot_forward(&path, 15, &c).is_ok());
        assert!(ecf_spot_forward(&path, 16, &c).is_err());
        assert!(ecf_spot_backward(&path, 6, &c).is_ok());
        assert!(ecf_spot_backward(&path, 5, &c).is_err());
        assert!(ecf_spot_backward(&path, 21, &c).is_err());
        assert!(plain_spot(&path, 16, &c, Direction::Forward).is_err());
        assert!(truncated_spot(&path, 5, &c, Direction::Backward).is_err());
        assert!(fourth_moment(&path, 16, &c, false).is_err());
    }

    #[test]
    fn truncated_hand_case() {
        // Window {0.01, -0.5, 0.02} with threshold 0.1 keeps the outer two:
        // (0.01² + 0.02²)/(3·1e-4).
        let path = path_from_returns(&[0.01, -0.5, 0.02, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-4);
        let mut c = cfg(1.0, 3, 8);
        c.alpha = 0.1 / (1e-4f64).powf(c.omega);
        assert!((c.truncation_level(1e-4) - 0.1).abs() < 1e-15);
        let est = truncated_spot(&path, 0, &c, Direction::Forward).unwrap();
        let expected = (0.01f64.powi(2) + 0.02f64.powi(2)) / (3.0 * 1e-4);
        assert!((est - expected).abs() < 1e-12);
        // All increments above threshold -> 0.
        c.alpha = 0.001 / (1e-4f64).powf(c.omega);
        assert_eq!(truncated_spot(&path, 0, &c, Direction::Forward).unwrap(), 0.0);
        // No increment above threshold -> equals the plain estimator.
        c.alpha = 1.0 / (1e-4f64).powf(c.omega);
        assert_eq!(
            truncated_spot(&path, 0, &c, Direction::Forward).unwrap(),
            plain_spot(&path, 0, &c, Direction::Forward).unwrap()
        );
    }

    #[test]
    fn frozen_window_regressions() {
        // k_n = 4 window {0.01, -0.02, 0.015, 0.005}, Δn = 1e-4, u = 1: the
        // cosine average is 0.26811... < 1/√4, so the floor binds and the
        // value is exactly ln 4. Constants frozen from a one-shot
        // high-precision evaluation of the formula.
        let path = path_from_returns(&[0.01, -0.02, 0.015, 0.005, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-4);
        let c = cfg(1.0, 4, 10);
        let est = ecf_spot_forward(&path, 0, &c).unwrap();
        assert!((est - 1.38629436111989057e0).abs() < 1e-14);

        // Same window scaled by 1/10 keeps the average above the floor.
        let path2 =
            path_from_returns(&[0.001, -0.002, 0.0015, 0.0005, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-4);
        let est2 = ecf_spot_forward(&path2, 0, &c).unwrap();
        assert!((est2 - 1.87919679312101295e-2).abs() < 1e-15);
    }

    #[test]
    fn bipower_single_product() {
        let path = path_from_returns(&[0.03, 0.03], 1e-4);
        let bv = bipower_variation(&path);
        assert!((bv - std::f64::consts::FRAC_PI_2 * 0.0009).abs() < 1e-18);
    }

    #[test]
    fn fourth_moment_single_return() {
        let path = path_from_returns(&[0.02, 0.0, 0.0, 0.0], 1e-4);
        let c = cfg(1.0, 1, 4);
        let est = fourth_moment(&path, 0, &c, false).unwrap();
        let expected = 0.02f64.powi(4) / (3.0 * 1e-8);
        assert!((est - expected).abs() / expected < 1e-14);
    }

    #[test]
    fn ecf_respects_bounds() {
        let returns: Vec<f64> = (0..50).map(|j| ((j as f64).sin()) * 0.3).collect();
        let path = path_from_returns(&returns, 1e-2);
        let c = cfg(0.8, 10, 50);
        let bound = ecf_upper_bound(&c);
        for i in 0..=40 {
            let est = ecf_spot_forward(&path, i, &c).unwrap();
            assert!((0.0..=bound).contains(&est), "estimate {est} outside [0, {bound}]");
        }
    }
}
