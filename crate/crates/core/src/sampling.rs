//! Deterministic point sets in the open unit ball of `C^n`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::C64;

const PRIMES: [u64; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131,
];

/// Radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    out
}

/// The `i`-th point of the Halton sequence in `[0, 1)^dim` (`dim <= 32`).
pub fn halton(i: u64, dim: usize) -> Vec<f64> {
    PRIMES[..dim].iter().map(|&b| radical_inverse(i, b)).collect()
}

/// Maps `2n + 1` numbers in `(0, 1)` to a point of the ball of radius `rmax`:
/// a complex Gaussian direction (Box-Muller on pairs) and a volume-uniform radius.
fn to_ball(u: &[f64], n: usize, rmax: f64) -> Vec<C64> {
    let mut p: Vec<C64> = (0..n)
        .map(|j| {
            let a = u[2 * j].max(1e-300);
            let t = std::f64::consts::TAU * u[2 * j + 1];
            C64::from_polar((-2.0 * a.ln()).sqrt(), t)
        })
        .collect();
    let norm = crate::point_norm(&p);
    if norm == 0.0 {
        return vec![C64::new(0.0, 0.0); n];
    }
    let r = rmax * u[2 * n].powf(1.0 / (2 * n) as f64);
    for c in &mut p {
        *c *= r / norm;
    }
    p
}

/// `count` Halton points spread over the ball `|lambda| <= rmax` in `C^n`.
/// Only `n <= 15` is supported.
pub fn halton_ball(n: usize, count: usize, rmax: f64) -> Vec<Vec<C64>> {
    assert!(2 * n < PRIMES.len(), "Halton sampling supports n <= 15");
    // skip the first points, which sit on the cube's corner
    (1..=count as u64)
        .map(|i| to_ball(&halton(i + 16, 2 * n + 1), n, rmax))
        .collect()
}

/// `count` pseudo-random points of the ball `|lambda| <= rmax`, seeded.
pub fn random_ball(n: usize, count: usize, rmax: f64, seed: u64) -> Vec<Vec<C64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u: Vec<f64> = (0..2 * n + 1).map(|_| rng.gen::<f64>()).collect();
            to_ball(&u, n, rmax)
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
