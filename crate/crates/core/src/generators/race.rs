//! Samplers for the clock races behind the line-subtree probability.

use rand::Rng;

use super::cmj::exp_sample;
use super::GeneratorError;

/// Exponential time with Poisson-increasing rate.
///
/// A rate-`lambda` Poisson stream of points `pi_1 < pi_2 < ...` drives a
/// clock whose rate is `j * nu` between `pi_j` and `pi_{j+1}`; the result is
/// the first ring `pi_zeta + Y_zeta`.
pub fn sample_h<R: Rng + ?Sized>(lambda: f64, nu: f64, rng: &mut R) -> Result<f64, GeneratorError> {
    if !(lambda > 0.0 && lambda.is_finite() && nu > 0.0 && nu.is_finite()) {
        return Err(GeneratorError::InvalidParams(format!("rates lambda = {lambda}, nu = {nu} must be positive")));
    }
    // the rate-0 clock of index 0 never rings before pi_1
    let mut pi = exp_sample(lambda, rng);
    let mut j = 1u64;
    loop {
        let gap = exp_sample(lambda, rng);
        let y = exp_sample(j as f64 * nu, rng);
        if y <= gap {
            return Ok(pi + y);
        }
        pi += gap;
        j += 1;
    }
}

/// Draws from the density proportional to `exp(chi * y)` on `[0, x]`: the
/// birth time of a root child given the root is observed at time `x`.
pub fn sample_child_birth<R: Rng + ?Sized>(chi: i8, x: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    if chi == 0 {
        u * x
    } else {
        let c = f64::from(chi);
        (u * (c * x).exp_m1()).ln_1p() / c
    }
}
