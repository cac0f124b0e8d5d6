//! Single multi-valued neuron and its error-correction rule.

use crate::numerics::{fused_rate, rate_per_share, ComplexScalar, Meter, Phase};

use super::{check_len, Result, MVN_EPSILON};

#[derive(Clone, Debug, PartialEq)]
pub struct MvnNeuron {
    pub weights: Vec<ComplexScalar>,
    pub bias: ComplexScalar,
}

impl MvnNeuron {
    pub fn new(weights: Vec<ComplexScalar>, bias: ComplexScalar) -> Self {
        Self { weights, bias }
    }

    pub fn weighted_sum(&self, x: &[ComplexScalar], meter: &mut Meter) -> ComplexScalar {
        self.weights
            .iter()
            .zip(x)
            .fold(self.bias, |acc, (&w, &xi)| acc + meter.cmul(w, xi))
    }

    /// Unit-circle output `z / |z|`.
    pub fn output(&self, x: &[ComplexScalar], meter: &mut Meter) -> Result<ComplexScalar> {
        let z = self.weighted_sum(x, meter);
        Ok(meter.unit_project(z, MVN_EPSILON)?.0)
    }
}

/// One error-correction step towards the weighted sum `target`:
/// `w_i += rate / (n + 1) * (target - z) * conj(x_i)`, `b += rate / (n + 1) * (target - z)`.
///
/// With `rate = 1` and unit-magnitude inputs the corrected weighted sum equals
/// `target` exactly. Returns the weighted sum after the correction.
pub fn mvn_correct(
    neuron: &mut MvnNeuron,
    x: &[ComplexScalar],
    target: ComplexScalar,
    rate: f64,
    meter: &mut Meter,
) -> Result<ComplexScalar> {
    check_len("input", neuron.weights.len(), x.len())?;
    meter.set_phase(Phase::Forward);
    let z = neuron.weighted_sum(x, meter);
    let scaled = fused_rate(
        target - z,
        rate_per_share(rate, neuron.weights.len().saturating_add(1)),
    );
    meter.set_phase(Phase::ParameterUpdate);
    for (w, &xi) in neuron.weights.iter_mut().zip(x) {
        *w += meter.cmul(scaled, xi.conj());
    }
    neuron.bias += scaled;
    meter.set_phase(Phase::Forward);
    Ok(neuron.weighted_sum(x, meter))
}
