// Scratch probe: is the leverage bias intrinsic to the estimator on fresh
// paths, or an artifact of the fixed-volatility resampling?
use ecfvol_core::config::{EstimatorConfig, WindowExponent};
use ecfvol_core::levvov::leverage_ecf;
use ecfvol_core::sim::{resample_price, simulate, ModelParams};

fn main() {
    let params = ModelParams {
        rho: -0.4,
        eta: 0.2,
        gamma: 0.0,
        ..ModelParams::baseline()
    };
    let n = 2730;
    let k_n = 52;
    let cfg = EstimatorConfig::with_window(1.0, WindowExponent::HALF, k_n, n, 10.0, 0.49).unwrap();
    let reps = 800;

    // Fresh paths: per-rep truth.
    let mut rel_sum = 0.0;
    for rep in 0..reps {
        let sim = simulate(&params, n, 1.0, 30_000 + rep).unwrap();
        let est = leverage_ecf(&sim.price_path(), &cfg).unwrap().value;
        rel_sum += (est - sim.true_leverage) / sim.true_leverage;
    }
    println!("fresh sims:   mean rel bias = {:+.4}", rel_sum / reps as f64);

    // Resampled, different base vol seeds.
    for base_seed in [77u64, 123, 5005] {
        let base = simulate(&params, n, 1.0, base_seed).unwrap();
        let mut sum = 0.0;
        for rep in 0..reps {
            let p = resample_price(&base.sigma2, &params, 1.0, 40_000 + rep).unwrap();
            sum += leverage_ecf(&p.price_path(), &cfg).unwrap().value;
        }
        let mean = sum / reps as f64;
        println!(
            "resampled (vol seed {base_seed}): rel bias = {:+.4}",
            (mean - base.true_leverage) / base.true_leverage
        );
    }
}
