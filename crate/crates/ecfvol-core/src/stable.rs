//! Symmetric stable sampling via the Chambers–Mallows–Stuck transform.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StableError {
    #[error("stable index must lie in (0, 2), got {0}")]
    BadIndex(f64),
}

/// One draw from the standard symmetric stable law with characteristic
/// function `E[exp(iuS)] = exp(-|u|^beta)`.
///
/// Symmetric Chambers–Mallows–Stuck form: with `U ~ Uniform(-π/2, π/2)` and
/// `E ~ Exp(1)`,
///
/// ```text
/// S = sin(beta·U)/cos(U)^{1/beta} · (cos((1-beta)·U)/E)^{(1-beta)/beta}.
/// ```
///
/// At `beta = 1` the second factor has exponent 0 and the expression reduces
/// to `tan(U)`, the standard Cauchy.
pub fn sample_symmetric_stable<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> Result<f64, StableError> {
    if !(beta > 0.0 && beta < 2.0) {
        return Err(StableError::BadIndex(beta));
    }
    Ok(draw(beta, rng))
}

/// `count` i.i.d. standard symmetric stable draws.
pub fn sample_symmetric_stable_many<R: Rng + ?Sized>(
    beta: f64,
    count: usize,
    rng: &mut R,
) -> Result<Vec<f64>, StableError> {
    if !(beta > 0.0 && beta < 2.0) {
        return Err(StableError::BadIndex(beta));
    }
    Ok((0..count).map(|_| draw(beta, rng)).collect())
}

#[inline]
fn draw<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> f64 {
    let u: f64 = std::f64::consts::PI * (rng.gen::<f64>() - 0.5);
    let e: f64 = Exp1.sample(rng);
    let s = (beta * u).sin() / u.cos().powf(1.0 / beta);
    s * (((1.0 - beta) * u).cos() / e).powf((1.0 - beta) / beta)
}
