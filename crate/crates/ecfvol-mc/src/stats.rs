//! Summary statistics for replication outputs.

use ecfvol_core::numerics::KahanSum;
use statrs::distribution::{ContinuousCDF, Normal};

/// Mean / sample SD / mean-square summary of a replication column.
#[derive(Debug, Clone, Copy)]
pub struct MomentSummary {
    pub mean: f64,
    pub sd: f64,
    pub mse: f64,
    pub count: usize,
}

/// Compensated moments in replication order; `mse` is the raw second moment
/// (mean of squares), so `mse = mean² + (count-1)/count · sd²` holds up to
/// accumulation rounding.
pub fn moments(values: &[f64]) -> Option<MomentSummary> {
    if values.len() < 2 {
        return None;
    }
    let count = values.len();
    let mut sum = KahanSum::new();
    let mut sumsq = KahanSum::new();
    for &v in values {
        sum.add(v);
        sumsq.add(v * v);
    }
    let mean = sum.value() / count as f64;
    let mut centered = KahanSum::new();
    for &v in values {
        let d = v - mean;
        centered.add(d * d);
    }
    Some(MomentSummary {
        mean,
        sd: (centered.value() / (count - 1) as f64).sqrt(),
        mse: sumsq.value() / count as f64,
        count,
    })
}

/// Kolmogorov–Smirnov distance between a sample and the standard normal.
pub fn ks_distance_normal(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = normal.cdf(x);
        d = d.max((cdf - i as f64 / n).abs());
        d = d.max((cdf - (i as f64 + 1.0) / n).abs());
    }
    Some(d)
}

/// Normal quantile pairs `(Φ⁻¹((i-0.5)/N), x_(i))` for Q-Q output.
pub fn qq_pairs(values: &[f64]) -> Vec<(f64, f64)> {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (normal.inverse_cdf((i as f64 + 0.5) / n), x))
        .collect()
}

/// Fixed histogram over [-4, 4] with 25 bins; outliers fall into the end bins.
pub fn histogram(values: &[f64]) -> Vec<(f64, f64, usize)> {
    const BINS: usize = 25;
    const LO: f64 = -4.0;
    const HI: f64 = 4.0;
    let width = (HI - LO) / BINS as f64;
    let mut counts = vec![0usize; BINS];
    for &v in values {
        let idx = (((v - LO) / width).floor() as i64).clamp(0, BINS as i64 - 1) as usize;
        counts[idx] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| (LO + i as f64 * width, LO + (i as f64 + 1.0) * width, c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_identity() {
        let values = [0.3, -1.2, 0.7, 2.2, -0.4, 0.0, 1.1];
        let m = moments(&values).unwrap();
        let recon = m.mean * m.mean + (m.count - 1) as f64 / m.count as f64 * m.sd * m.sd;
        assert!((m.mse - recon).abs() < 1e-12);
    }

    #[test]
    fn ks_zero_for_exact_quantiles() {
        // Sample placed at the (i-0.5)/n normal quantiles: KS = 0.5/n.
        let normal = Normal::new(0.0, 1.0).unwrap();
        let n = 100;
        let values: Vec<f64> = (0..n)
            .map(|i| normal.inverse_cdf((i as f64 + 0.5) / n as f64))
            .collect();
        let d = ks_distance_normal(&values).unwrap();
        assert!((d - 0.5 / n as f64).abs() < 1e-12, "d = {d}");
    }

    #[test]
    fn histogram_covers_everything() {
        let values = [-10.0, -3.9, 0.0, 3.9, 10.0];
        let bins = histogram(&values);
        let total: usize = bins.iter().map(|b| b.2).sum();
        assert_eq!(total, values.len());
        assert_eq!(bins.len(), 25);
    }
}
