// Scratch probe: finite-sample bias of the leverage estimator under
// fixed-volatility resampling, as a function of (n, k_n, u, rho).
use ecfvol_core::config::{EstimatorConfig, WindowExponent};
use ecfvol_core::levvov::leverage_ecf;
use ecfvol_core::sim::{resample_price, simulate, ModelParams};

fn main() {
    let reps = 600;
    for rho in [-0.4, -0.8] {
        for (n, t) in [(2730usize, 1.0), (2730 * 4, 4.0)] {
            let params = ModelParams {
                rho,
                eta: 0.2,
                gamma: 0.0,
                ..ModelParams::baseline()
            };
            let base = simulate(&params, n, t, 77).unwrap();
            for kmul in [1.0, 2.0] {
                let k_n = ((n as f64 / t).sqrt() * kmul).floor() as usize;
                for u in [0.5, 1.0, 2.0] {
                    let cfg =
                        EstimatorConfig::with_window(u, WindowExponent::HALF, k_n, n, 10.0, 0.49)
                            .unwrap();
                    let mut sum = 0.0;
                    for rep in 0..reps {
                        let p = resample_price(&base.sigma2, &params, t, 9000 + rep).unwrap();
                        sum += leverage_ecf(&p.price_path(), &cfg).unwrap().value;
                    }
                    let mean = sum / reps as f64;
                    let rel = (mean - base.true_leverage) / base.true_leverage;
                    println!(
                        "rho={rho:+.1} n={n:6} k={k_n:3} u={u:3.1}  mean={mean:+.6e} truth={:+.6e} relbias={rel:+.3}",
                        base.true_leverage
                    );
                }
            }
        }
    }
}
