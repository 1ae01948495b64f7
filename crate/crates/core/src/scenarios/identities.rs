use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::ScenarioError;

/// Max of `|alpha sin 2x sin y + beta sin 2y sin x - 2 sin x sin y (alpha cos x + beta cos y)|`
/// over `points` random points of the square `]0, pi[^2`.
pub fn square_identity(alpha: f64, beta: f64, points: usize, seed: u64) -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..points)
        .map(|_| {
            let x = rng.gen_range(0.0..PI);
            let y = rng.gen_range(0.0..PI);
            let lhs = alpha * (2.0 * x).sin() * y.sin() + beta * (2.0 * y).sin() * x.sin();
            let rhs = 2.0 * x.sin() * y.sin() * (alpha * x.cos() + beta * y.cos());
            (lhs - rhs).abs()
        })
        .fold(0.0, f64::max)
}

/// Least-squares fit of `phi_d2 = a phi_d1 phi_n` on the right isosceles
/// triangle `0 < y < x < pi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsoscelesFit {
    pub a: f64,
    /// Max absolute residual at the sample points.
    pub residual: f64,
}

fn dirichlet(m: u32, n: u32, x: f64, y: f64) -> f64 {
    let (m, n) = (m as f64, n as f64);
    (m * x).sin() * (n * y).sin() - (n * x).sin() * (m * y).sin()
}

fn neumann(m: u32, n: u32, x: f64, y: f64) -> f64 {
    let (m, n) = (m as f64, n as f64);
    (m * x).cos() * (n * y).cos() + (n * x).cos() * (m * y).cos()
}

/// Fit with the second Neumann mode `(1, 0)`.
pub fn isosceles_identity(points: usize, seed: u64) -> Result<IsoscelesFit, ScenarioError> {
    isosceles_identity_with((1, 0), points, seed)
}

/// Fit with an arbitrary Neumann mode `(m, n)` of the half square.
pub fn isosceles_identity_with(neumann_mode: (u32, u32), points: usize, seed: u64) -> Result<IsoscelesFit, ScenarioError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let samples: Vec<(f64, f64)> = (0..points)
        .map(|_| {
            let x = rng.gen_range(0.0..PI);
            let y = rng.gen_range(0.0..x.max(f64::MIN_POSITIVE));
            // phi_d1 = (2,1), phi_d2 = (3,1)
            let g = dirichlet(2, 1, x, y) * neumann(neumann_mode.0, neumann_mode.1, x, y);
            (dirichlet(3, 1, x, y), g)
        })
        .collect();
    let gg: f64 = samples.iter().map(|&(_, g)| g * g).sum();
    let fg: f64 = samples.iter().map(|&(f, g)| f * g).sum();
    if !(gg > 1e-300) {
        return Err(ScenarioError::DegenerateFit);
    }
    let a = fg / gg;
    let residual = samples.iter().map(|&(f, g)| (f - a * g).abs()).fold(0.0, f64::max);
    Ok(IsoscelesFit { a, residual })
}
