//! Seeded, replication-parallel Monte Carlo harness for the estimation
//! studies: relative-bias comparison tables, fixed-volatility CLT
//! verification against the exact limit variance, and feasible-CLT
//! experiments standardised by the plug-in variance estimates.
//!
//! Replication `r` of an experiment always uses seed `base_seed + 1 + r`,
//! results are aggregated in replication order, and summaries avoid
//! non-finite values, so a given spec produces byte-identical artifacts
//! regardless of worker count or scheduling.

pub mod output;
pub mod presets;
pub mod run;
pub mod spec;
pub mod stats;

pub use run::{run, BiasRow, CltRow, McError, McResults, McRun, McSummary, SampleColumn};
pub use spec::{ExperimentSpec, McMode};
