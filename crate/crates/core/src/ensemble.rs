//! Seeded random smooth radial data.
//!
//! Each member is a superposition of five even Gaussian bumps with
//! parameters drawn from a ChaCha stream, so a seed fixes the ensemble on
//! every platform.

use crate::transform::{RadialField, RadialGrid};
use alloc::sync::Arc;
use alloc::vec::Vec;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bumps per ensemble member.
pub const BUMPS: usize = 5;

/// Even extension of a Gaussian centred at r0, scaled to equal `a` at r0:
/// a·(e^{−(r−r0)²/w²} + e^{−(r+r0)²/w²}) / (1 + e^{−4r0²/w²}).
pub fn symmetric_gaussian(a: f64, r0: f64, w: f64, r: f64) -> f64 {
    let g = |x: f64| (-(x * x) / (w * w)).exp();
    a * (g(r - r0) + g(r + r0)) / (1.0 + g(2.0 * r0))
}

/// Parameters of one bump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

impl Bump {
    pub fn eval(&self, r: f64) -> f64 {
        symmetric_gaussian(self.amplitude, self.center, self.width, r)
    }
}

/// Draws `count` members of five bumps each, amplitudes in [−1, 1], centres
/// in [0, 4], widths in [0.5, 1.5].
pub fn random_bumps(seed: u64, count: usize) -> Vec<[Bump; BUMPS]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            core::array::from_fn(|_| Bump {
                amplitude: rng.random_range(-1.0..=1.0),
                center: rng.random_range(0.0..=4.0),
                width: rng.random_range(0.5..=1.5),
            })
        })
        .collect()
}

/// Samples a member on `grid`.
pub fn sample_member(member: &[Bump; BUMPS], grid: &Arc<RadialGrid>) -> RadialField {
    grid.sample(|r| member.iter().map(|b| b.eval(r)).sum())
}

/// `count` random smooth fields on `grid`.
pub fn random_fields(seed: u64, count: usize, grid: &Arc<RadialGrid>) -> Vec<RadialField> {
    random_bumps(seed, count).iter().map(|m| sample_member(m, grid)).collect()
}
