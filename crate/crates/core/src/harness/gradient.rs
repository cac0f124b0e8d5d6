use crate::networks::{Network, TrainConfig};
use crate::numerics::{ComplexScalar, Meter};

use super::HarnessError;

/// Magnitude below which gradient components are compared absolutely rather
/// than relatively.
pub const GRADIENT_FLOOR: f64 = 1e-7;

/// `|a - n| / max(|a|, |n|, floor)`.
pub fn relative_error(analytic: f64, numeric: f64, floor: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(floor)
}

/// Gradient of `1/2 |d - y|^2` over the flattened real parameters, read off
/// the training step taken with unit rates.
pub fn analytic_gradient(
    net: &Network,
    x: &[ComplexScalar],
    d: &[ComplexScalar],
) -> Result<Vec<f64>, HarnessError> {
    let (step, _) = net.descent_step(x, d, &TrainConfig::uniform(1.0), &mut Meter::new())?;
    Ok(step.into_iter().map(|s| -s).collect())
}

/// Central differences of the loss over every real parameter component.
pub fn numeric_gradient(
    net: &Network,
    x: &[ComplexScalar],
    d: &[ComplexScalar],
    step: f64,
) -> Result<Vec<f64>, HarnessError> {
    let base = net.parameters();
    let mut probe = net.clone();
    let mut theta = base.clone();
    let mut grad = Vec::with_capacity(base.len());
    for k in 0..base.len() {
        theta[k] = base[k] + step;
        probe.set_parameters(&theta)?;
        let up = probe.loss(x, d)?;
        theta[k] = base[k] - step;
        probe.set_parameters(&theta)?;
        let down = probe.loss(x, d)?;
        theta[k] = base[k];
        let q = (up - down) / (2.0 * step);
        if !q.is_finite() {
            return Err(HarnessError::NonFinite(format!(
                "difference quotient for parameter {k}"
            )));
        }
        grad.push(q);
    }
    Ok(grad)
}

/// Largest per-component relative error between the analytic gradient and
/// central finite differences with the given step.
pub fn gradient_check(
    net: &Network,
    x: &[ComplexScalar],
    d: &[ComplexScalar],
    step: f64,
) -> Result<f64, HarnessError> {
    if !net.is_gradient_family() {
        return Err(HarnessError::InvalidArgument(format!(
            "{} is not trained by gradient descent",
            net.arch()
        )));
    }
    if !(1e-7..=1e-4).contains(&step) {
        return Err(HarnessError::InvalidArgument(format!(
            "finite-difference step {step} outside [1e-7, 1e-4]"
        )));
    }
    let analytic = analytic_gradient(net, x, d)?;
    let numeric = numeric_gradient(net, x, d, step)?;
    Ok(analytic
        .iter()
        .zip(&numeric)
        .map(|(&a, &n)| relative_error(a, n, GRADIENT_FLOOR))
        .fold(0.0, f64::max))
}
