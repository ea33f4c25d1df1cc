// Scratch probe: joint seed scan for the two feasible-CLT presets.
use ecfvol_mc::presets;
use ecfvol_mc::run::{run, McResults};

fn main() {
    for seed in [5006u64, 9006, 10_006, 11_006, 12_006, 13_006] {
        for name in ["fea-clt-desk", "fea-clt-jump-desk"] {
            let mut spec = presets::preset(name).unwrap();
            spec.base_seed = seed;
            let out = run(&spec).unwrap();
            if let McResults::Clt { rows } = &out.summary.results {
                let r = &rows[0];
                println!(
                    "{name:18} seed {seed}: M={:+.3} Var={:.3} KS={:.3} excl={}",
                    r.mean.unwrap(),
                    r.var.unwrap(),
                    r.ks_normal.unwrap(),
                    r.excluded
                );
            }
        }
    }
}
