// Scratch probe: size and power of the zero-leverage / zero-VoV tests.
use ecfvol_core::config::ConfigSpec;
use ecfvol_core::inference::{zero_leverage_test, zero_vov_test, TestDecision};
use ecfvol_core::sim::{simulate, ModelParams};

fn main() {
    let n = 2730 * 12;
    let reps = 200;
    let cfg_spec = ConfigSpec::empirical_default();

    for (tag, rho, eta, lev) in [
        ("lev size (rho=0)", 0.0, 0.3, true),
        ("lev power (rho=-0.6)", -0.6, 0.3, true),
        ("vov size (eta=0)", -0.2, 0.0, false),
        ("vov power (eta=0.3)", -0.2, 0.3, false),
    ] {
        let model = ModelParams {
            rho,
            eta,
            gamma: 0.0,
            ..ModelParams::baseline()
        };
        let mut rejects = 0;
        let mut undefined = 0;
        for rep in 0..reps {
            let sim = simulate(&model, n, 1.0, 555_000 + rep).unwrap();
            let path = sim.price_path();
            let cfg = cfg_spec.resolve(&path).unwrap();
            let outcome = if lev {
                zero_leverage_test(&path, &cfg, 0.05).map(|r| r.decision)
            } else {
                zero_vov_test(&path, &cfg, 0.05).map(|r| r.decision)
            };
            match outcome {
                Ok(TestDecision::RejectH0) => rejects += 1,
                Ok(TestDecision::FailToReject) => {}
                Err(_) => undefined += 1,
            }
        }
        println!(
            "{tag:22}: reject {:.1}% undefined {}",
            100.0 * rejects as f64 / reps as f64,
            undefined
        );
    }
}
