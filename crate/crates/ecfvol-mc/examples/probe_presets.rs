// Scratch probe: run the desk presets and print their digests against the
// acceptance tolerances.
use ecfvol_mc::run::McResults;
use ecfvol_mc::{presets, run};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    for name in args {
        let spec = presets::preset(&name).expect("preset exists");
        let started = std::time::Instant::now();
        let result = run::run(&spec).expect("run succeeds");
        println!("== {name} ({:?}) in {:?}", spec.mode, started.elapsed());
        match &result.summary.results {
            McResults::RelativeBias { rows } => {
                for r in rows {
                    println!(
                        "  {:<12} M={:+.4} SD={:.4} MSE={:.4} used={} undef={}",
                        r.label,
                        r.mean.unwrap_or(f64::NAN),
                        r.sd.unwrap_or(f64::NAN),
                        r.mse.unwrap_or(f64::NAN),
                        r.used_reps,
                        r.undefined
                    );
                }
            }
            McResults::Clt { rows } => {
                for r in rows {
                    println!(
                        "  {:<12} M={:+.4e} Var={:.4e} T-Var={:?} ratio={:?} KS={:.4} excl={}",
                        r.label,
                        r.mean.unwrap_or(f64::NAN),
                        r.var.unwrap_or(f64::NAN),
                        r.t_var,
                        r.t_var.map(|t| r.var.unwrap_or(f64::NAN) / t),
                        r.ks_normal.unwrap_or(f64::NAN),
                        r.excluded
                    );
                }
            }
        }
    }
}
