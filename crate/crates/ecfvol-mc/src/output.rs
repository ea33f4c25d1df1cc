//! Artifact files: `summary.json`, `samples.csv`, and for the CLT modes
//! `hist.csv` (bin_left,bin_right,count) and `qq.csv`
//! (theoretical_quantile,sample_quantile). All numeric formatting uses the
//! shortest round-trip representation, so identical runs produce identical
//! bytes.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::run::{McResults, McRun};
use crate::spec::McMode;
use crate::stats::{histogram, qq_pairs};

pub fn write_artifacts(dir: &Path, run: &McRun) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let summary = serde_json::to_string_pretty(&run.summary).expect("summary is always finite");
    fs::write(dir.join("summary.json"), summary + "\n")?;

    let mut samples = String::from("rep,estimator,value\n");
    for column in &run.samples {
        for &(rep, value) in &column.values {
            samples.push_str(&format!("{rep},{},{value}\n", column.label));
        }
    }
    fs::write(dir.join("samples.csv"), samples)?;

    if matches!(run.summary.mode, McMode::CltInfeasible | McMode::CltFeasible) {
        // Standardised samples: feasible stats are already on the N(0,1)
        // scale; infeasible ones are divided by sqrt(T-Var).
        let scale_of = |label: &str| -> f64 {
            if let McResults::Clt { rows } = &run.summary.results {
                rows.iter()
                    .find(|r| r.label == label)
                    .and_then(|r| r.t_var)
                    .map(|v| v.sqrt())
                    .unwrap_or(1.0)
            } else {
                1.0
            }
        };

        let mut hist = String::from("estimator,bin_left,bin_right,count\n");
        let mut qq = String::from("estimator,theoretical_quantile,sample_quantile\n");
        for column in &run.samples {
            let scale = scale_of(&column.label);
            let standardised: Vec<f64> =
                column.values.iter().map(|&(_, v)| v / scale).collect();
            for (lo, hi, count) in histogram(&standardised) {
                hist.push_str(&format!("{},{lo},{hi},{count}\n", column.label));
            }
            for (theo, sample) in qq_pairs(&standardised) {
                qq.push_str(&format!("{},{theo},{sample}\n", column.label));
            }
        }
        fs::write(dir.join("hist.csv"), hist)?;
        fs::write(dir.join("qq.csv"), qq)?;
    }
    Ok(())
}

/// Writes a plain-text one-line-per-row digest next to the artifacts; handy
/// for eyeballing results without a JSON tool.
pub fn write_digest(dir: &Path, run: &McRun) -> std::io::Result<()> {
    let mut out = fs::File::create(dir.join("digest.txt"))?;
    writeln!(out, "experiment: {}", run.summary.experiment)?;
    match &run.summary.results {
        McResults::RelativeBias { rows } => {
            for r in rows {
                writeln!(
                    out,
                    "{:<12} M={:+.4} SD={:.4} MSE={:.4} (used {}, zero-truth {}, undefined {})",
                    r.label,
                    r.mean.unwrap_or(f64::NAN),
                    r.sd.unwrap_or(f64::NAN),
                    r.mse.unwrap_or(f64::NAN),
                    r.used_reps,
                    r.skipped_zero_truth,
                    r.undefined
                )?;
            }
        }
        McResults::Clt { rows } => {
            for r in rows {
                writeln!(
                    out,
                    "{:<12} M={:+.4e} Var={:.4e} T-Var={} KS={:.4} (used {}, excluded {})",
                    r.label,
                    r.mean.unwrap_or(f64::NAN),
                    r.var.unwrap_or(f64::NAN),
                    r.t_var.map_or("n/a".to_string(), |v| format!("{v:.4e}")),
                    r.ks_normal.unwrap_or(f64::NAN),
                    r.used_reps,
                    r.excluded
                )?;
            }
        }
    }
    Ok(())
}
