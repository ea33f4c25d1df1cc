//! Replication runners.
//!
//! Replications are independent tasks over the deterministic seed sequence
//! `base_seed + 1 + rep`; results are collected in replication order and
//! aggregated sequentially, so summaries are bit-identical no matter how many
//! workers execute them.

use ecfvol_core::config::{ConfigError, ConfigSpec, EstimatorConfig, FrequencyRule, TruncationRule, WindowRule};
use ecfvol_core::inference::{
    leverage_avar_hat_with_curve, leverage_limit_variance, optimal_kappa_hat_with_curve,
    vov_avar_hat_with_curve, vov_limit_variance, InferenceError,
};
use ecfvol_core::levvov::{
    estimate_by_id, leverage_ecf_with_curve, vov_ecf_with_curve, EstimateError, EstimatorId,
};
use ecfvol_core::path::PricePath;
use ecfvol_core::sim::{resample_price, simulate, SimError, SimulatedPath};
use ecfvol_core::spot::{ecf_spot_curve, SpotError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spec::{ExperimentSpec, McMode, SpecError};
use crate::stats::{ks_distance_normal, moments};

#[derive(Debug, Error)]
pub enum McError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error(transparent)]
    Spot(#[from] SpotError),
    #[error("experiment produced no usable replications for {0}")]
    Degenerate(String),
}

/// Relative-bias table row.
///
/// The headline `mean`/`sd`/`mse` normalise each replication's error by the
/// model-implied target (`ηρθT` for leverage, `η²θT` for vol-of-vol, `ρ` for
/// the correlation form), matching the published comparison tables. The
/// `*_path_truth` triple normalises by each replication's own latent
/// Riemann-sum target instead, which removes the target's sampling
/// variation from the dispersion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BiasRow {
    pub id: EstimatorId,
    pub label: String,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub mse: Option<f64>,
    pub mean_path_truth: Option<f64>,
    pub sd_path_truth: Option<f64>,
    pub mse_path_truth: Option<f64>,
    pub used_reps: usize,
    pub skipped_zero_truth: usize,
    pub undefined: usize,
}

/// CLT-experiment row (one estimator).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CltRow {
    pub id: EstimatorId,
    pub label: String,
    /// Mean of the rate-scaled (infeasible) or standardised (feasible) stats.
    pub mean: Option<f64>,
    pub var: Option<f64>,
    /// Exact limit variance from the latent path (infeasible mode only).
    pub t_var: Option<f64>,
    /// KS distance of the standardised sample to N(0,1).
    pub ks_normal: Option<f64>,
    pub used_reps: usize,
    pub excluded: usize,
    pub excluded_fraction: f64,
    /// Latent Riemann-sum target the errors were taken against.
    pub truth: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum McResults {
    RelativeBias { rows: Vec<BiasRow> },
    Clt { rows: Vec<CltRow> },
}

/// Everything `summary.json` carries. Field values are finite or absent, so
/// serialization is total and byte-stable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McSummary {
    pub experiment: String,
    pub mode: McMode,
    pub model: ecfvol_core::sim::ModelParams,
    pub n: usize,
    pub horizon: f64,
    pub reps: usize,
    pub base_seed: u64,
    pub cfg: ConfigSpec,
    pub results: McResults,
}

/// Raw per-replication values for `samples.csv` (rep index, value), one
/// column per estimator, in replication order.
#[derive(Debug, Clone)]
pub struct SampleColumn {
    pub id: EstimatorId,
    pub label: String,
    pub values: Vec<(usize, f64)>,
}

#[derive(Debug, Clone)]
pub struct McRun {
    pub summary: McSummary,
    pub samples: Vec<SampleColumn>,
}

pub fn run(spec: &ExperimentSpec) -> Result<McRun, McError> {
    spec.validate()?;
    match spec.mode {
        McMode::RelativeBias => run_relative_bias(spec),
        McMode::CltInfeasible => run_clt_infeasible(spec),
        McMode::CltFeasible => run_clt_feasible(spec),
    }
}

/// Relative bias of an estimate against a latent truth; `None` marks a
/// replication whose truth is exactly zero (reported, not aggregated).
pub fn relative_bias(estimate: f64, truth: f64) -> Option<f64> {
    if truth == 0.0 {
        None
    } else {
        Some((estimate - truth) / truth)
    }
}

/// Latent per-path target for an estimator.
fn truth_for(id: EstimatorId, sim: &SimulatedPath, rho: f64) -> f64 {
    match id {
        EstimatorId::LevCor => rho,
        _ if id.is_leverage() => sim.true_leverage,
        _ => sim.true_vov,
    }
}

/// Model-implied constant target: with the variance process started at its
/// long-run level, `E[∫σ²dt] = θT` exactly.
fn expected_truth_for(id: EstimatorId, model: &ecfvol_core::sim::ModelParams, horizon: f64) -> f64 {
    let expected_iv = model.theta * horizon;
    match id {
        EstimatorId::LevCor => model.rho,
        _ if id.is_leverage() => model.eta * model.rho * expected_iv,
        _ => model.eta * model.eta * expected_iv,
    }
}

enum Outcome {
    /// (constant-truth rel bias, per-path-truth rel bias)
    Value(f64, f64),
    ZeroTruth,
    Undefined,
}

pub fn run_relative_bias(spec: &ExperimentSpec) -> Result<McRun, McError> {
    let per_rep: Vec<Vec<Outcome>> = (0..spec.reps)
        .into_par_iter()
        .map(|rep| -> Result<Vec<Outcome>, McError> {
            let sim = simulate(&spec.model, spec.n, spec.horizon, spec.rep_seed(rep))?;
            let path = sim.price_path();
            let cfg = spec.cfg.resolve(&path)?;
            Ok(spec
                .estimators
                .iter()
                .map(|&id| match estimate_by_id(id, &path, &cfg) {
                    Ok(est) => {
                        let constant = relative_bias(
                            est.value,
                            expected_truth_for(id, &spec.model, spec.horizon),
                        );
                        let per_path =
                            relative_bias(est.value, truth_for(id, &sim, spec.model.rho));
                        match (constant, per_path) {
                            (Some(c), Some(p)) => Outcome::Value(c, p),
                            _ => Outcome::ZeroTruth,
                        }
                    }
                    Err(_) => Outcome::Undefined,
                })
                .collect())
        })
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::with_capacity(spec.estimators.len());
    let mut samples = Vec::with_capacity(spec.estimators.len());
    for (col, &id) in spec.estimators.iter().enumerate() {
        let mut values = Vec::with_capacity(spec.reps);
        let mut path_truth_values = Vec::with_capacity(spec.reps);
        let mut skipped = 0usize;
        let mut undefined = 0usize;
        for (rep, outcomes) in per_rep.iter().enumerate() {
            match outcomes[col] {
                Outcome::Value(c, p) => {
                    values.push((rep, c));
                    path_truth_values.push(p);
                }
                Outcome::ZeroTruth => skipped += 1,
                Outcome::Undefined => undefined += 1,
            }
        }
        let plain: Vec<f64> = values.iter().map(|&(_, v)| v).collect();
        let m = moments(&plain);
        let mp = moments(&path_truth_values);
        rows.push(BiasRow {
            id,
            label: id.label().to_string(),
            mean: m.map(|m| m.mean),
            sd: m.map(|m| m.sd),
            mse: m.map(|m| m.mse),
            mean_path_truth: mp.map(|m| m.mean),
            sd_path_truth: mp.map(|m| m.sd),
            mse_path_truth: mp.map(|m| m.mse),
            used_reps: plain.len(),
            skipped_zero_truth: skipped,
            undefined,
        });
        samples.push(SampleColumn {
            id,
            label: id.label().to_string(),
            values,
        });
    }

    Ok(McRun {
        summary: McSummary {
            experiment: spec.name.clone(),
            mode: spec.mode,
            model: spec.model,
            n: spec.n,
            horizon: spec.horizon,
            reps: spec.reps,
            base_seed: spec.base_seed,
            cfg: spec.cfg,
            results: McResults::RelativeBias { rows },
        },
        samples,
    })
}

/// Resolves data-driven rules against the latent path (the CLT experiments
/// fix one variance path, so `u` and `alpha` are pinned from its integrated
/// variance rather than re-estimated per replication).
fn resolve_for_latent(
    cfg: &ConfigSpec,
    n: usize,
    delta_n: f64,
    latent_iv: f64,
) -> Result<EstimatorConfig, ConfigError> {
    let u = match cfg.u {
        FrequencyRule::Fixed(u) => u,
        FrequencyRule::LogBipower => (n as f64).ln().powf(-1.0 / 40.0) / latent_iv.sqrt(),
    };
    let alpha = match cfg.alpha {
        TruncationRule::Fixed(a) => a,
        TruncationRule::BipowerMultiple(c) => c * latent_iv.sqrt(),
    };
    match cfg.window {
        WindowRule::PowerLaw { kappa } => {
            EstimatorConfig::from_rule(u, cfg.b, kappa, n, alpha, cfg.omega)
        }
        WindowRule::SqrtInvDelta => {
            let k_n = (1.0 / delta_n).sqrt().floor() as usize;
            EstimatorConfig::with_window(u, cfg.b, k_n, n, alpha, cfg.omega)
        }
        WindowRule::Fixed(k_n) => EstimatorConfig::with_window(u, cfg.b, k_n, n, alpha, cfg.omega),
    }
}

fn clt_rate(id: EstimatorId, n: usize, cfg: &EstimatorConfig) -> f64 {
    let nf = n as f64;
    if id.is_leverage() {
        nf.powf(cfg.b.min_with_complement() / 2.0)
    } else {
        nf.powf((1.0 - cfg.b.value()) / 2.0)
    }
}

pub fn run_clt_infeasible(spec: &ExperimentSpec) -> Result<McRun, McError> {
    let base = simulate(&spec.model, spec.n, spec.horizon, spec.base_seed)?;
    let cfg = resolve_for_latent(
        &spec.cfg,
        spec.n,
        base.delta_n,
        base.integrated_variance(),
    )?;

    let per_rep: Vec<Vec<Option<f64>>> = (0..spec.reps)
        .into_par_iter()
        .map(|rep| -> Result<Vec<Option<f64>>, McError> {
            let resampled =
                resample_price(&base.sigma2, &spec.model, spec.horizon, spec.rep_seed(rep))?;
            let path = resampled.price_path();
            Ok(spec
                .estimators
                .iter()
                .map(|&id| {
                    estimate_by_id(id, &path, &cfg).ok().map(|est| {
                        let truth = truth_for(id, &base, spec.model.rho);
                        clt_rate(id, spec.n, &cfg) * (est.value - truth)
                    })
                })
                .collect())
        })
        .collect::<Result<_, _>>()?;

    let vds = spec.model.vol_diffusion_sq();
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for (col, &id) in spec.estimators.iter().enumerate() {
        let t_var = if id.is_leverage() {
            leverage_limit_variance(&base.sigma2, base.delta_n, cfg.u, cfg.kappa, cfg.b, vds)
        } else {
            vov_limit_variance(&base.sigma2, base.delta_n, cfg.u, cfg.kappa, cfg.b, vds)
        };
        let mut values = Vec::new();
        let mut excluded = 0usize;
        for (rep, outcomes) in per_rep.iter().enumerate() {
            match outcomes[col] {
                Some(v) => values.push((rep, v)),
                None => excluded += 1,
            }
        }
        let plain: Vec<f64> = values.iter().map(|&(_, v)| v).collect();
        let standardised: Vec<f64> = plain.iter().map(|v| v / t_var.sqrt()).collect();
        let m = moments(&plain);
        rows.push(CltRow {
            id,
            label: id.label().to_string(),
            mean: m.map(|m| m.mean),
            var: m.map(|m| m.sd * m.sd),
            t_var: Some(t_var),
            ks_normal: ks_distance_normal(&standardised),
            used_reps: plain.len(),
            excluded,
            excluded_fraction: excluded as f64 / spec.reps as f64,
            truth: truth_for(id, &base, spec.model.rho),
        });
        samples.push(SampleColumn {
            id,
            label: id.label().to_string(),
            values,
        });
        if plain.is_empty() {
            return Err(McError::Degenerate(id.label().to_string()));
        }
    }

    Ok(McRun {
        summary: McSummary {
            experiment: spec.name.clone(),
            mode: spec.mode,
            model: spec.model,
            n: spec.n,
            horizon: spec.horizon,
            reps: spec.reps,
            base_seed: spec.base_seed,
            cfg: spec.cfg,
            results: McResults::Clt { rows },
        },
        samples,
    })
}

/// One feasible replication for one estimator: re-estimate the window
/// constant from the pilot curve, re-run, and standardise by the plug-in
/// variance. `None` when any stage is undefined.
fn feasible_stat(
    id: EstimatorId,
    path: &PricePath,
    pilot: &EstimatorConfig,
    pilot_curve: &[f64],
    spec: &ExperimentSpec,
    truth: f64,
) -> Option<f64> {
    let n = path.n();
    let (cfg, curve) = if spec.pilot_kappa.is_some() {
        let kappa_hat = optimal_kappa_hat_with_curve(path, pilot, pilot_curve).ok()?;
        let cfg = EstimatorConfig::from_rule(
            pilot.u,
            pilot.b,
            kappa_hat,
            n,
            pilot.alpha,
            pilot.omega,
        )
        .ok()?;
        let curve = ecf_spot_curve(path, &cfg).ok()?;
        (cfg, curve)
    } else {
        (*pilot, pilot_curve.to_vec())
    };
    let (estimate, avar) = match id {
        EstimatorId::LevOur => (
            leverage_ecf_with_curve(path, &cfg, &curve).ok()?.value,
            leverage_avar_hat_with_curve(path, &cfg, &curve).ok()?,
        ),
        EstimatorId::VovOur => (
            vov_ecf_with_curve(path, &cfg, &curve).ok()?.value,
            vov_avar_hat_with_curve(path, &cfg, &curve).ok()?,
        ),
        _ => return None,
    };
    if !(avar > 0.0) || !avar.is_finite() {
        return None;
    }
    Some(clt_rate(id, n, &cfg) * (estimate - truth) / avar.sqrt())
}

pub fn run_clt_feasible(spec: &ExperimentSpec) -> Result<McRun, McError> {
    let base = simulate(&spec.model, spec.n, spec.horizon, spec.base_seed)?;

    let per_rep: Vec<Vec<Option<f64>>> = (0..spec.reps)
        .into_par_iter()
        .map(|rep| -> Result<Vec<Option<f64>>, McError> {
            let resampled =
                resample_price(&base.sigma2, &spec.model, spec.horizon, spec.rep_seed(rep))?;
            let path = resampled.price_path();
            // The pilot window uses the configured rule with the pilot
            // constant; u and alpha resolve from the path like on real data.
            let mut pilot_spec = spec.cfg;
            if let Some(kappa) = spec.pilot_kappa {
                pilot_spec.window = WindowRule::PowerLaw { kappa };
            }
            let pilot = pilot_spec.resolve(&path)?;
            let pilot_curve = ecf_spot_curve(&path, &pilot)?;
            Ok(spec
                .estimators
                .iter()
                .map(|&id| {
                    let truth = truth_for(id, &base, spec.model.rho);
                    feasible_stat(id, &path, &pilot, &pilot_curve, spec, truth)
                })
                .collect())
        })
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for (col, &id) in spec.estimators.iter().enumerate() {
        let mut values = Vec::new();
        let mut excluded = 0usize;
        for (rep, outcomes) in per_rep.iter().enumerate() {
            match outcomes[col] {
                Some(v) => values.push((rep, v)),
                None => excluded += 1,
            }
        }
        let plain: Vec<f64> = values.iter().map(|&(_, v)| v).collect();
        if plain.len() < 2 {
            return Err(McError::Degenerate(id.label().to_string()));
        }
        let m = moments(&plain);
        rows.push(CltRow {
            id,
            label: id.label().to_string(),
            mean: m.map(|m| m.mean),
            var: m.map(|m| m.sd * m.sd),
            t_var: None,
            ks_normal: ks_distance_normal(&plain),
            used_reps: plain.len(),
            excluded,
            excluded_fraction: excluded as f64 / spec.reps as f64,
            truth: truth_for(id, &base, spec.model.rho),
        });
        samples.push(SampleColumn {
            id,
            label: id.label().to_string(),
            values,
        });
    }

    Ok(McRun {
        summary: McSummary {
            experiment: spec.name.clone(),
            mode: spec.mode,
            model: spec.model,
            n: spec.n,
            horizon: spec.horizon,
            reps: spec.reps,
            base_seed: spec.base_seed,
            cfg: spec.cfg,
            results: McResults::Clt { rows },
        },
        samples,
    })
}
