// Scratch probe: relative-bias dispersion under per-path vs constant truth.
use ecfvol_core::config::ConfigSpec;
use ecfvol_core::levvov::{estimate_by_id, EstimatorId};
use ecfvol_core::sim::{simulate, ModelParams};

fn main() {
    let model = ModelParams {
        rho: -0.6,
        eta: 0.3,
        gamma: 0.0,
        ..ModelParams::baseline()
    };
    let n = 2730;
    let reps = 600;
    let cfg_spec = ConfigSpec::monte_carlo_default();
    let expected_truth = model.eta * model.rho * model.theta * 1.0; // ηρθT
    let ids = [EstimatorId::LevOur, EstimatorId::LevAFLWY17];
    let mut per_path: Vec<Vec<f64>> = vec![Vec::new(), Vec::new()];
    let mut constant: Vec<Vec<f64>> = vec![Vec::new(), Vec::new()];
    let mut iv_levels: Vec<f64> = Vec::new();
    for rep in 0..reps {
        let sim = simulate(&model, n, 1.0, 7000 + rep).unwrap();
        let path = sim.price_path();
        let cfg = cfg_spec.resolve(&path).unwrap();
        iv_levels.push(sim.integrated_variance());
        for (j, &id) in ids.iter().enumerate() {
            let est = estimate_by_id(id, &path, &cfg).unwrap().value;
            per_path[j].push((est - sim.true_leverage) / sim.true_leverage);
            constant[j].push((est - expected_truth) / expected_truth);
        }
    }
    let stats = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        let sd =
            (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt();
        (m, sd)
    };
    let ivm = stats(&iv_levels);
    println!("IV level: mean {:.5}, sd {:.5} (rel {:.3})", ivm.0, ivm.1, ivm.1 / ivm.0);
    for (j, id) in ids.iter().enumerate() {
        let a = stats(&per_path[j]);
        let b = stats(&constant[j]);
        println!(
            "{:<12} per-path truth: M={:+.3} SD={:.3} | constant truth: M={:+.3} SD={:.3}",
            id.label(),
            a.0,
            a.1,
            b.0,
            b.1
        );
    }
}
