//! Log-concave measures beyond Lebesgue volume: the standard Gaussian
//! N(0, I_d), analytic on axis-parallel boxes (a product of error-function
//! factors) and Monte-Carlo with a reported standard error for everything
//! else.

use rand::Rng;
use statrs::function::erf::erf;

use crate::body::{AxisBox, Body};
use crate::error::Result;
use crate::rng::seeded_rng;

/// Default Monte-Carlo sample count for Gaussian measure of non-box bodies.
pub const GAUSSIAN_MC_SAMPLES: usize = 1_000_000;

/// Standard normal CDF.
pub fn phi(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// Gaussian measure of an axis-parallel box: Π_i [Φ(c_i+w_i) − Φ(c_i−w_i)].
pub fn gaussian_box(b: &AxisBox) -> f64 {
    b.center
        .iter()
        .zip(&b.halfwidths)
        .map(|(c, w)| phi(c + w) - phi(c - w))
        .product()
}

/// Per-axis derivative pair of one Gaussian box factor with respect to
/// (center, halfwidth); used by the analytic-gradient box solver.
pub fn gaussian_box_factor_grad(c: f64, w: f64) -> (f64, f64, f64) {
    let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let f = phi(c + w) - phi(c - w);
    let dfdc = pdf(c + w) - pdf(c - w);
    let dfdw = pdf(c + w) + pdf(c - w);
    (f, dfdc, dfdw)
}

/// Monte-Carlo Gaussian measure of any body: draws N(0, I) samples and counts
/// membership. Returns (estimate, standard error).
pub fn gaussian_mc(body: &Body, samples: usize, seed: u64) -> Result<(f64, f64)> {
    let d = body.dim();
    let mut rng = seeded_rng(seed, 0x6d63);
    let mut hits = 0usize;
    for _ in 0..samples {
        let x: Vec<f64> = (0..d)
            .map(|_| {
                let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        if body.membership(&x, 0.0) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let se = (p * (1.0 - p) / samples as f64).sqrt();
    Ok((p, se))
}
