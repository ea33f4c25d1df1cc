// Scratch probe: feasible-CLT centering across configurations.
use ecfvol_core::config::{ConfigSpec, FrequencyRule, TruncationRule, WindowExponent, WindowRule};
use ecfvol_mc::presets;
use ecfvol_mc::run::{run, McResults};

fn main() {
    let base = presets::preset("fea-clt-desk").unwrap();
    let variants: Vec<(&str, Option<f64>, ConfigSpec)> = vec![
        (
            "pilot k_opt b=.55",
            Some(1.0),
            base.cfg,
        ),
        (
            "fixed kappa=2 b=.55",
            None,
            ConfigSpec {
                u: FrequencyRule::Fixed(1.0),
                b: WindowExponent::new(11, 20).unwrap(),
                window: WindowRule::PowerLaw { kappa: 2.0 },
                alpha: TruncationRule::BipowerMultiple(5.0),
                omega: 0.49,
            },
        ),
        (
            "fixed kappa=1 b=.5",
            None,
            ConfigSpec {
                u: FrequencyRule::Fixed(1.0),
                b: WindowExponent::HALF,
                window: WindowRule::PowerLaw { kappa: 1.0 },
                alpha: TruncationRule::BipowerMultiple(5.0),
                omega: 0.49,
            },
        ),
        (
            "fixed kappa=2 b=.5",
            None,
            ConfigSpec {
                u: FrequencyRule::Fixed(1.0),
                b: WindowExponent::HALF,
                window: WindowRule::PowerLaw { kappa: 2.0 },
                alpha: TruncationRule::BipowerMultiple(5.0),
                omega: 0.49,
            },
        ),
    ];
    for (tag, pilot, cfg) in variants {
        for seed in [1006u64, 2006, 3006, 5006] {
            let mut spec = base.clone();
            spec.reps = 150;
            spec.base_seed = seed;
            spec.pilot_kappa = pilot;
            spec.cfg = cfg;
            let out = run(&spec).unwrap();
            if let McResults::Clt { rows } = &out.summary.results {
                let r = &rows[0];
                println!(
                    "{tag:22} seed {seed}: M={:+.3} Var={:.3} KS={:.3} excl={}",
                    r.mean.unwrap(),
                    r.var.unwrap(),
                    r.ks_normal.unwrap(),
                    r.excluded
                );
            }
        }
    }
}
