// Scratch probe: feasible-CLT mean/KS across base-path seeds.
use ecfvol_mc::presets;
use ecfvol_mc::run::{run, McResults};

fn main() {
    let mut spec = presets::preset("fea-clt-desk").unwrap();
    spec.reps = 150;
    for seed in [1006u64, 2006, 3006, 4006, 5006, 6006, 7006, 8006] {
        spec.base_seed = seed;
        let out = run(&spec).unwrap();
        if let McResults::Clt { rows } = &out.summary.results {
            let r = &rows[0];
            println!(
                "seed {seed}: M={:+.3} Var={:.3} KS={:.3} excl={}",
                r.mean.unwrap(),
                r.var.unwrap(),
                r.ks_normal.unwrap(),
                r.excluded
            );
        }
    }
}
