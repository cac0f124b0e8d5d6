//! Fixtures shared by the benchmarks.

use cvnn_core::{ArchKind, ComplexScalar, NetworkSpec, ShallowSpec};

/// Deterministic inputs on the unit circle.
pub fn unit_inputs(len: usize) -> Vec<ComplexScalar> {
    (0..len)
        .map(|k| {
            let t = 0.7 + k as f64;
            ComplexScalar::new(t.cos(), t.sin())
        })
        .collect()
}

/// Targets inside the unit disc, away from the saturated region of tanh.
pub fn targets(len: usize) -> Vec<ComplexScalar> {
    unit_inputs(len)
        .into_iter()
        .map(|z| z.pow2_scale(-1))
        .collect()
}

pub fn shallow(arch: ArchKind, inputs: usize, outputs: usize, neurons: usize) -> NetworkSpec {
    ShallowSpec::new(arch, inputs, outputs, neurons)
        .expect("benchmark spec")
        .into()
}
