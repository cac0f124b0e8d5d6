//! Seeded parameter initialization. Not metered: it runs once per network and
//! is outside both inference and training.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numerics::ComplexScalar;

pub(crate) type InitRng = ChaCha8Rng;

pub(crate) fn rng(seed: u64) -> InitRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` values uniform on `[-1, 1]^2`, scaled by `1/sqrt(fan_in)`.
pub(crate) fn weights(rng: &mut InitRng, count: usize, fan_in: usize) -> Vec<ComplexScalar> {
    let scale = 1.0 / (fan_in.max(1) as f64).sqrt();
    (0..count)
        .map(|_| {
            ComplexScalar::new(
                rng.gen_range(-1.0..=1.0) * scale,
                rng.gen_range(-1.0..=1.0) * scale,
            )
        })
        .collect()
}

/// `count` centers uniform on the unit square `[0, 1]^2`.
pub(crate) fn centers(rng: &mut InitRng, count: usize) -> Vec<ComplexScalar> {
    (0..count)
        .map(|_| ComplexScalar::new(rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=1.0)))
        .collect()
}
