//! Experiment descriptions.

use ecfvol_core::config::ConfigSpec;
use ecfvol_core::levvov::EstimatorId;
use ecfvol_core::sim::ModelParams;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("reps must be >= 1")]
    NoReps,
    #[error("estimator list must be non-empty")]
    NoEstimators,
    #[error("{0:?} cannot be run by the harness (needs a caller-supplied transform)")]
    Unsupported(EstimatorId),
    #[error("feasible-CLT mode supports only the headline estimators, got {0:?}")]
    NotHeadline(EstimatorId),
}

/// Which study the harness runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum McMode {
    /// Fresh path per replication; per-estimator relative biases vs the
    /// latent Riemann-sum truth, summarised as mean / SD / MSE.
    RelativeBias,
    /// One latent variance path, conditional price resampling; records
    /// rate-scaled estimation errors and the exact limit variance computed
    /// from the latent path.
    CltInfeasible,
    /// As above but standardised by the plug-in variance estimates, with the
    /// window constant re-estimated per path from a pilot configuration.
    CltFeasible,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub model: ModelParams,
    /// Observation intervals per replication.
    pub n: usize,
    /// Horizon in time units (months under the preset conventions).
    pub horizon: f64,
    pub reps: usize,
    pub estimators: Vec<EstimatorId>,
    pub cfg: ConfigSpec,
    pub mode: McMode,
    pub base_seed: u64,
    /// Pilot window constant for the feasible mode; when set, each
    /// replication re-estimates the optimal constant from this pilot and
    /// re-runs the estimator with it.
    pub pilot_kappa: Option<f64>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        if self.reps == 0 {
            return Err(SpecError::NoReps);
        }
        if self.estimators.is_empty() {
            return Err(SpecError::NoEstimators);
        }
        for &id in &self.estimators {
            if id == EstimatorId::LevFunc {
                return Err(SpecError::Unsupported(id));
            }
            if self.mode == McMode::CltFeasible
                && !matches!(id, EstimatorId::LevOur | EstimatorId::VovOur)
            {
                return Err(SpecError::NotHeadline(id));
            }
        }
        Ok(())
    }

    /// Replication seeds: the base seed is reserved for the latent path of
    /// the CLT modes, replication `r` uses `base_seed + 1 + r`.
    pub fn rep_seed(&self, rep: usize) -> u64 {
        self.base_seed + 1 + rep as u64
    }
}
