//! Equispaced log-price observations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PathError {
    #[error("price path needs at least 2 observations, got {0}")]
    TooShort(usize),
    #[error("time step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("non-finite log-price at index {0}")]
    NonFinite(usize),
}

/// Log-prices observed on the equispaced grid `t_i = i·delta_n`, `i = 0..=n`.
///
/// Increments are precomputed once; every estimator works off increments, so
/// adding a constant to all log-prices changes nothing downstream.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PricePath {
    log_prices: Vec<f64>,
    delta_n: f64,
    returns: Vec<f64>,
}

impl PricePath {
    pub fn new(log_prices: Vec<f64>, delta_n: f64) -> Result<Self, PathError> {
        if log_prices.len() < 2 {
            return Err(PathError::TooShort(log_prices.len()));
        }
        if !(delta_n.is_finite() && delta_n > 0.0) {
            return Err(PathError::BadStep(delta_n));
        }
        if let Some(i) = log_prices.iter().position(|x| !x.is_finite()) {
            return Err(PathError::NonFinite(i));
        }
        let returns = log_prices.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self {
            log_prices,
            delta_n,
            returns,
        })
    }

    /// Number of increments `n`.
    pub fn n(&self) -> usize {
        self.returns.len()
    }

    pub fn delta_n(&self) -> f64 {
        self.delta_n
    }

    /// Observation horizon `T = n·delta_n`.
    pub fn horizon(&self) -> f64 {
        self.delta_n * self.n() as f64
    }

    pub fn log_prices(&self) -> &[f64] {
        &self.log_prices
    }

    /// Increment `Δ_j X = X_{t_j} − X_{t_{j-1}}` lives at `returns()[j-1]`.
    pub fn returns(&self) -> &[f64] {
        &self.returns
    }

    pub fn log_price(&self, i: usize) -> f64 {
        self.log_prices[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn returns_are_exact_differences() {
        let p = PricePath::new(vec![0.0, 0.1, 0.05, 0.3], 0.5).unwrap();
        assert_eq!(p.n(), 3);
        assert_eq!(p.returns()[0], 0.1);
        assert_eq!(p.returns()[1], 0.05 - 0.1);
        assert_eq!(p.returns()[2], 0.3 - 0.05);
        assert_eq!(p.horizon(), 1.5);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(PricePath::new(vec![0.0], 0.1).is_err());
        assert!(PricePath::new(vec![0.0, 1.0], 0.0).is_err());
        assert!(PricePath::new(vec![0.0, f64::NAN], 0.1).is_err());
    }
}
