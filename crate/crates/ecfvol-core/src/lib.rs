//! Jump-robust estimation of spot volatility, leverage effect and
//! volatility of volatility from high-frequency log prices, with feasible
//! central-limit inference, baseline comparison estimators, a jump-diffusion
//! simulator and tick-data ingestion.
//!
//! Layout:
//! - [`sim`]: the data-generating process (square-root variance diffusion,
//!   symmetric stable plus compound-Poisson jumps) and conditional price
//!   resampling for fixed-volatility experiments.
//! - [`spot`]: local spot-variance estimators, characteristic-function based
//!   and classical.
//! - [`levvov`]: integrated leverage and vol-of-vol estimators plus all
//!   comparison baselines.
//! - [`inference`]: limiting-variance functions, plug-in variance estimators,
//!   optimal window constant, and the zero-leverage / zero-VoV tests.
//! - [`ingest`]: previous-tick resampling of raw trades onto session grids.

pub mod config;
pub mod inference;
pub mod ingest;
pub mod levvov;
pub mod numerics;
pub mod path;
pub mod sim;
pub mod spot;
pub mod stable;

pub use config::{ConfigSpec, EstimatorConfig, FrequencyRule, TruncationRule, WindowExponent, WindowRule};
pub use inference::{EstimateReport, TestDecision};
pub use levvov::{EstimatorId, LevVovEstimate};
pub use path::PricePath;
pub use sim::{ModelParams, SimulatedPath};
