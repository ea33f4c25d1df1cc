//! Naive reference implementations of every estimator and variance plug-in,
//! written as direct loop transcriptions of the defining formulas.
//!
//! This crate exists only to cross-check the production implementations in
//! tests. It deliberately shares no code with them: plain `f64` sums, no
//! compensated accumulation, no curve reuse, windows recomputed from scratch
//! inside double loops. Keep it boring.
//!
//! Index conventions match the estimation formulas: increments are 1-based
//! (`dx(j) = x[j] - x[j-1]`, `j = 1..=n`), the forward window at grid index
//! `i` uses `j ∈ {i+1, …, i+k}` and the backward window `j ∈ {i-k, …, i-1}`.

/// Increment `Δ_j X` for 1-based `j`.
fn dx(x: &[f64], j: usize) -> f64 {
    x[j] - x[j - 1]
}

/// h1(u, s2) straight from its printed form (adequate for moderate `u`).
pub fn h1(u: f64, s2: f64) -> f64 {
    let a = u * u * s2;
    2.0 * ((-2.0 * a).exp() - 2.0 * (-a).exp() + 1.0) / (u.powi(4) * (-a).exp())
}

/// ECF spot estimate over the forward window rooted at `i`.
pub fn ecf_fwd(x: &[f64], delta_n: f64, i: usize, k: usize, u: f64) -> f64 {
    let mut s = 0.0;
    for j in i + 1..=i + k {
        s += (u * dx(x, j) / delta_n.sqrt()).cos();
    }
    let avg = (s / k as f64).max(1.0 / (k as f64).sqrt());
    -2.0 / (u * u) * avg.ln()
}

/// ECF spot estimate over the backward window rooted at `i`.
pub fn ecf_bwd(x: &[f64], delta_n: f64, i: usize, k: usize, u: f64) -> f64 {
    let mut s = 0.0;
    for j in i - k..=i - 1 {
        s += (u * dx(x, j) / delta_n.sqrt()).cos();
    }
    let avg = (s / k as f64).max(1.0 / (k as f64).sqrt());
    -2.0 / (u * u) * avg.ln()
}

pub fn plain_fwd(x: &[f64], delta_n: f64, i: usize, k: usize) -> f64 {
    let mut s = 0.0;
    for j in i + 1..=i + k {
        s += dx(x, j).powi(2);
    }
    s / (k as f64 * delta_n)
}

pub fn plain_bwd(x: &[f64], delta_n: f64, i: usize, k: usize) -> f64 {
    let mut s = 0.0;
    for j in i - k..=i - 1 {
        s += dx(x, j).powi(2);
    }
    s / (k as f64 * delta_n)
}

pub fn thr_fwd(x: &[f64], delta_n: f64, i: usize, k: usize, level: f64) -> f64 {
    let mut s = 0.0;
    for j in i + 1..=i + k {
        let d = dx(x, j);
        if d.abs() <= level {
            s += d * d;
        }
    }
    s / (k as f64 * delta_n)
}

pub fn thr_bwd(x: &[f64], delta_n: f64, i: usize, k: usize, level: f64) -> f64 {
    let mut s = 0.0;
    for j in i - k..=i - 1 {
        let d = dx(x, j);
        if d.abs() <= level {
            s += d * d;
        }
    }
    s / (k as f64 * delta_n)
}

pub fn fourth_fwd(x: &[f64], delta_n: f64, i: usize, k: usize, level: Option<f64>) -> f64 {
    let mut s = 0.0;
    for j in 1..=k {
        let d = dx(x, i + j);
        if let Some(level) = level {
            if d.abs() > level {
                continue;
            }
        }
        s += d.powi(4);
    }
    s / (3.0 * k as f64 * delta_n * delta_n)
}

pub fn bipower(x: &[f64], _delta_n: f64) -> f64 {
    let n = x.len() - 1;
    let mut s = 0.0;
    for i in 1..=n - 1 {
        s += dx(x, i).abs() * dx(x, i + 1).abs();
    }
    std::f64::consts::FRAC_PI_2 * s
}

pub fn leverage_ecf(x: &[f64], delta_n: f64, k: usize, u: f64) -> f64 {
    let n = x.len() - 1;
    let mut s = 0.0;
    for i in k + 1..=n - k {
        s += dx(x, i) * (ecf_fwd(x, delta_n, i, k, u) - ecf_bwd(x, delta_n, i, k, u));
    }
    s
}

pub fn leverage_functional(
    x: &[f64],
    delta_n: f64,
    k: usize,
    u: f64,
    f: impl Fn(f64) -> f64,
) -> f64 {
    let n = x.len() - 1;
    let mut s = 0.0;
    for i in k + 1..=n - k {
        s += dx(x, i) * (f(ecf_fwd(x, delta_n, i, k, u)) - f(ecf_bwd(x, delta_n, i, k, u)));
    }
    s
}

pub fn vov_ecf(x: &[f64], delta_n: f64, k: usize, u: f64) -> f64 {
    let n = x.len() - 1;
    let kf = k as f64;
    let mut s = 0.0;
    for i in k + 1..=n - k {
        let d = ecf_fwd(x, delta_n, i, k, u) - ecf_bwd(x, delta_n, i, k, u);
        s += 3.0 / (2.0 * kf) * d * d - 3.0 / (kf * kf) * h1(u, ecf_fwd(x, delta_n, i, k, u));
    }
    s
}

pub fn leverage_correlation(x: &[f64], delta_n: f64, k: usize, u: f64) -> Option<f64> {
    let n = x.len() - 1;
    let lev = leverage_ecf(x, delta_n, k, u);
    let vov = vov_ecf(x, delta_n, k, u);
    let mut iv = 0.0;
    for i in 0..=n - k {
        iv += ecf_fwd(x, delta_n, i, k, u);
    }
    let iv = delta_n * iv;
    if vov > 0.0 && iv > 0.0 {
        Some(lev / (iv.sqrt() * vov.sqrt()))
    } else {
        None
    }
}

pub fn leverage_wm14(x: &[f64], delta_n: f64, k: usize) -> f64 {
    let n = x.len() - 1;
    let blocks = n / k;
    let mut s = 0.0;
    for j in 0..=blocks - 2 {
        s += (x[(j + 1) * k] - x[j * k])
            * (plain_fwd(x, delta_n, (j + 1) * k, k) - plain_fwd(x, delta_n, j * k, k));
    }
    2.0 * s
}

pub fn leverage_aj14(x: &[f64], delta_n: f64, k: usize) -> f64 {
    let n = x.len() - 1;
    let mut s = 0.0;
    for i in 1..=n - 2 * k + 1 {
        s += (x[i + 2 * k - 1] - x[i - 1])
            * (plain_fwd(x, delta_n, i + k - 1, k) - plain_fwd(x, delta_n, i - 1, k));
    }
    s / k as f64
}

pub fn leverage_aflwy17(x: &[f64], delta_n: f64, k: usize, level: f64) -> f64 {
    let n = x.len() - 1;
    let mut s = 0.0;
    for i in k + 1..=n - k {
        let d = dx(x, i);
        if d.abs() <= level {
            s += d * (thr_fwd(x, delta_n, i, k, level) - thr_bwd(x, delta_n, i, k, level));
        }
    }
    s
}

pub fn vov_aj14(x: &[f64], delta_n: f64, k: usize) -> f64 {
    let n = x.len() - 1;
    let kf = k as f64;
    let mut s = 0.0;
    for i in 0..=n - 2 * k {
        let d = plain_fwd(x, delta_n, i + k, k) - plain_fwd(x, delta_n, i, k);
        s += d * d - 4.0 / kf * plain_fwd(x, delta_n, i, k).powi(2);
    }
    3.0 / (2.0 * kf) * s
}

pub fn vov_v15(x: &[f64], delta_n: f64, k: usize, level: Option<f64>) -> f64 {
    let n = x.len() - 1;
    let kf = k as f64;
    let spot = |i: usize| match level {
        Some(level) => thr_fwd(x, delta_n, i, k, level),
        None => plain_fwd(x, delta_n, i, k),
    };
    let mut s = 0.0;
    for i in 0..=n - 2 * k {
        let d = spot(i + k) - spot(i);
        s += 3.0 / (2.0 * kf) * d * d - 6.0 / (kf * kf) * fourth_fwd(x, delta_n, i, k, level);
    }
    s
}

pub fn vov_bv09(x: &[f64], delta_n: f64, k: usize, level: f64) -> f64 {
    let n = x.len() - 1;
    let mut s = 0.0;
    for i in 0..n - k {
        let d = thr_fwd(x, delta_n, i + 1, k, level) - thr_fwd(x, delta_n, i, k, level);
        s += d * d;
    }
    s
}

pub fn volatility_functional(x: &[f64], delta_n: f64, k: usize, u: f64, g: impl Fn(f64) -> f64) -> f64 {
    let n = x.len() - 1;
    let mut s = 0.0;
    for i in 0..=n - k {
        s += g(ecf_fwd(x, delta_n, i, k, u));
    }
    delta_n * s
}

/// Var(U|F) plug-in; `kappa = k / n^b`, `t = n·delta_n`.
pub fn leverage_avar_hat(
    x: &[f64],
    delta_n: f64,
    k: usize,
    u: f64,
    kappa: f64,
    b_le_half: bool,
    b_ge_half: bool,
) -> f64 {
    let n = x.len() - 1;
    let kf = k as f64;
    let t = n as f64 * delta_n;
    let mut total = 0.0;
    if b_le_half {
        let mut s = 0.0;
        for i in 0..=n - k {
            let est = ecf_fwd(x, delta_n, i, k, u);
            s += est * h1(u, est);
        }
        total += 2.0 / kappa * delta_n * s;
    }
    if b_ge_half {
        let mut s = 0.0;
        for i in k + 1..=n - k {
            let fwd = ecf_fwd(x, delta_n, i, k, u);
            let d = fwd - ecf_bwd(x, delta_n, i, k, u);
            s += fwd / 3.0 * (3.0 / (2.0 * kf) * d * d - 3.0 / (kf * kf) * h1(u, fwd));
        }
        total += 2.0 * kappa * t * s;
    }
    total
}

/// The three VoV variance components (H1, H2, H3).
pub fn vov_avar_terms(x: &[f64], delta_n: f64, k: usize, u: f64) -> (f64, f64, f64) {
    let n = x.len() - 1;
    let kf = k as f64;
    let block = kf * kf * delta_n;
    let mut t1 = 0.0;
    for i in 0..=n - k {
        let h = h1(u, ecf_fwd(x, delta_n, i, k, u));
        t1 += h * h / (block * block);
    }
    let t1 = delta_n * t1;
    let mut t2 = 0.0;
    let mut t3 = 0.0;
    for i in k + 1..=n - k {
        let fwd = ecf_fwd(x, delta_n, i, k, u);
        let d = fwd - ecf_bwd(x, delta_n, i, k, u);
        let h = h1(u, fwd);
        t2 += h / (3.0 * block) * (3.0 / (2.0 * kf) * d * d - 3.0 / (kf * kf) * h);
        t3 += d.powi(4);
    }
    (t1, t2, t3 / block)
}

pub fn vov_avar_hat(x: &[f64], delta_n: f64, k: usize, u: f64, kappa: f64, b_is_half: bool) -> f64 {
    let (t1, t2, t3) = vov_avar_terms(x, delta_n, k, u);
    let mut inner = 279.0 / 70.0 * t3;
    if b_is_half {
        inner += 891.0 / 35.0 * t1 + 38207.0 / 1400.0 * t2;
    }
    kappa * inner
}

pub fn spot_avar_noise_hat(x: &[f64], delta_n: f64, i: usize, k: usize, u: f64) -> f64 {
    h1(u, ecf_fwd(x, delta_n, i, k, u))
}

pub fn spot_avar_move_hat(x: &[f64], delta_n: f64, t_index: usize, k: usize, u: f64) -> f64 {
    let kf = k as f64;
    let mut s = 0.0;
    for i in t_index + 1..=t_index + k {
        let fwd = ecf_fwd(x, delta_n, i, k, u);
        let d = fwd - ecf_bwd(x, delta_n, i, k, u);
        s += 1.0 / (2.0 * kf) * d * d - 1.0 / (kf * kf) * h1(u, fwd);
    }
    s / (kf * delta_n)
}

pub fn optimal_kappa_hat(x: &[f64], delta_n: f64, k: usize, u: f64) -> Option<f64> {
    let n = x.len() - 1;
    let kf = k as f64;
    let t = n as f64 * delta_n;
    let mut num = 0.0;
    for i in 0..=n - k {
        let est = ecf_fwd(x, delta_n, i, k, u);
        num += est * h1(u, est);
    }
    let num = delta_n * num;
    let mut den = 0.0;
    for i in k + 1..=n - k {
        let fwd = ecf_fwd(x, delta_n, i, k, u);
        let d = fwd - ecf_bwd(x, delta_n, i, k, u);
        den += fwd / 3.0 * (3.0 / (2.0 * kf) * d * d - 3.0 / (kf * kf) * h1(u, fwd));
    }
    let den = t * den;
    if den > 0.0 {
        Some((num / den).sqrt())
    } else {
        None
    }
}
