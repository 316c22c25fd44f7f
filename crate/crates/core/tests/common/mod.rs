#![allow(dead_code)]

use num_complex::Complex64;
use phasebound_core::FockState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const DALPHA_GRID: [f64; 7] = [0.1, 0.5, 1.0, 2.0, 3.0, 5.0, 6.2];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_amplitudes(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect()
}

/// Normalized state with random offset in `0..6` and support length in `1..=8`.
pub fn random_state(rng: &mut ChaCha8Rng) -> FockState {
    let offset = rng.random_range(0..6);
    let len = rng.random_range(1..=8);
    FockState::new(offset, gaussian_amplitudes(rng, len))
        .unwrap()
        .normalize()
        .unwrap()
}

/// Trapezoid rule over one period; exact for trigonometric polynomials of
/// degree below `points`.
pub fn periodic_trapezoid(points: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = std::f64::consts::TAU / points as f64;
    (0..points)
        .map(|i| f(-std::f64::consts::PI + i as f64 * h))
        .sum::<f64>()
        * h
}
