use rand_distr::{Distribution, Normal};

use super::SystemParams;
use crate::{Error, Result};

/// The generator behind every stochastic draw of a run.
pub type SimRng = rand_chacha::ChaCha8Rng;

/// Draws `n` velocities from the Maxwellian `exp(-(u - mean)^2 / u_t^2)`,
/// i.e. a Gaussian of standard deviation `u_t / sqrt(2)`.
pub fn sample_maxwellian(
    params: &SystemParams,
    n: usize,
    mean_u: f64,
    rng: &mut SimRng,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("sample count must be positive"));
    }
    if !(params.u_t >= 0.0) {
        return Err(Error::domain(format!("u_t must be nonnegative, got {}", params.u_t)));
    }
    if params.u_t == 0.0 {
        return Ok(vec![mean_u; n]);
    }
    let dist = Normal::new(mean_u, params.u_t / std::f64::consts::SQRT_2)
        .map_err(|e| Error::domain(e.to_string()))?;
    Ok((0..n).map(|_| dist.sample(rng)).collect())
}
