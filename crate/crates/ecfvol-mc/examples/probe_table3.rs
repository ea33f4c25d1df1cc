// Scratch probe: table3 dispersion across window/frequency choices.
use ecfvol_core::config::{ConfigSpec, FrequencyRule, TruncationRule, WindowExponent, WindowRule};
use ecfvol_core::levvov::EstimatorId;
use ecfvol_core::sim::ModelParams;
use ecfvol_mc::run::{run, McResults};
use ecfvol_mc::spec::{ExperimentSpec, McMode};

fn main() {
    let model = ModelParams {
        rho: -0.2,
        eta: 0.3,
        gamma: 0.0,
        ..ModelParams::baseline()
    };
    for (tag, u, window) in [
        ("u*,k181", FrequencyRule::LogBipower, WindowRule::PowerLaw { kappa: 1.0 }),
        ("u*,k362", FrequencyRule::LogBipower, WindowRule::PowerLaw { kappa: 2.0 }),
        ("u=1,k181", FrequencyRule::Fixed(1.0), WindowRule::PowerLaw { kappa: 1.0 }),
        ("u=1,k362", FrequencyRule::Fixed(1.0), WindowRule::PowerLaw { kappa: 2.0 }),
    ] {
        let spec = ExperimentSpec {
            name: tag.to_string(),
            model,
            n: 2730 * 12,
            horizon: 1.0,
            reps: 100,
            estimators: vec![EstimatorId::VovOur, EstimatorId::VovV15],
            cfg: ConfigSpec {
                u,
                b: WindowExponent::HALF,
                window,
                alpha: TruncationRule::BipowerMultiple(5.0),
                omega: 0.49,
            },
            mode: McMode::RelativeBias,
            base_seed: 1003,
            pilot_kappa: None,
        };
        let out = run(&spec).unwrap();
        if let McResults::RelativeBias { rows } = &out.summary.results {
            for r in rows {
                println!(
                    "{tag:10} {:<8} const: M={:+.4} SD={:.4} | path: M={:+.4} SD={:.4}",
                    r.label,
                    r.mean.unwrap(),
                    r.sd.unwrap(),
                    r.mean_path_truth.unwrap(),
                    r.sd_path_truth.unwrap()
                );
            }
        }
    }
}
