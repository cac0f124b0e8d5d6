//! XOR with a single complex neuron.
//!
//! Inputs `x1, x2 in {-1, +1}` are encoded as `x1 + i x2`. The neuron is a 1x1
//! split-tanh layer, and its class is `sign(Re y) * sign(Im y)`, which equals
//! `x1 * x2` (the XOR label in the +-1 encoding) once `y` lands in the right
//! quadrant. A zero component has no sign and counts as a miss.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::networks::{Activation, PerceptronLayer};
use crate::numerics::{ComplexScalar, Meter};

use super::HarnessError;

pub const XOR_MAX_STEPS: usize = 10_000;
const RATE: f64 = 0.1;
const TARGET_SCALE: f64 = 0.8;

#[derive(Clone, Debug, PartialEq)]
pub struct XorOutcome {
    pub seed: u64,
    pub accuracy: f64,
    /// Training steps taken before all four patterns were classified, or the cap.
    pub steps: usize,
    pub neuron: PerceptronLayer,
}

/// `(input, label, training target)` for the four patterns.
pub fn xor_patterns() -> [(ComplexScalar, i8, ComplexScalar); 4] {
    let mut out = [(ComplexScalar::ZERO, 0, ComplexScalar::ZERO); 4];
    for (k, (a, b)) in [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)]
        .into_iter()
        .enumerate()
    {
        let label = if a == b { 1 } else { -1 };
        out[k] = (
            ComplexScalar::new(a, b),
            label,
            ComplexScalar::new(TARGET_SCALE * a, TARGET_SCALE * b),
        );
    }
    out
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Fraction of the four patterns the neuron classifies correctly.
pub fn xor_accuracy(neuron: &PerceptronLayer) -> Result<f64, HarnessError> {
    let mut meter = Meter::new();
    let mut hits = 0;
    for (x, label, _) in xor_patterns() {
        let y = neuron.output(Activation::SplitTanh, &[x], &mut meter)?[0];
        if sign(y.re) * sign(y.im) == label {
            hits += 1;
        }
    }
    Ok(f64::from(hits) / 4.0)
}

/// Trains one split-tanh neuron from a seeded random start for at most
/// [`XOR_MAX_STEPS`] online steps, cycling through the patterns.
pub fn xor_demo(seed: u64) -> Result<XorOutcome, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut neuron = PerceptronLayer::zeros(1, 1);
    neuron.weights[0] = ComplexScalar::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
    neuron.bias[0] = ComplexScalar::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
    let patterns = xor_patterns();
    let mut meter = Meter::new();
    let mut steps = 0;
    while steps < XOR_MAX_STEPS {
        if xor_accuracy(&neuron)? == 1.0 {
            break;
        }
        let (x, _, d) = patterns[steps % patterns.len()];
        neuron.train(Activation::SplitTanh, &[x], &[d], RATE, &mut meter)?;
        steps += 1;
    }
    let accuracy = xor_accuracy(&neuron)?;
    Ok(XorOutcome {
        seed,
        accuracy,
        steps,
        neuron,
    })
}
