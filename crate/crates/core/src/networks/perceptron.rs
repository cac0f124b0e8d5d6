//! Multilayer perceptrons: CVFNN (fully complex tanh), SCFNN (split tanh) and
//! MLMVN (unit-circle activation with error-correction learning).

use crate::cost_model::{ArchKind, DeepSpec};
use crate::numerics::{
    fused_rate, half_sq_norm, half_sum_sq, rate_per_share, ComplexScalar, Meter, Phase,
};

use super::init::{self, InitRng};
use super::{add_complex, push_complex, read_complex, Result, TrainConfig, MVN_EPSILON};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Activation {
    /// `tanh(z)` on the complex plane.
    FullyComplexTanh,
    /// `tanh(Re z) + i tanh(Im z)`.
    SplitTanh,
    /// `z / |z|`.
    UnitCircle,
}

impl Activation {
    pub fn for_arch(arch: ArchKind) -> Option<Self> {
        match arch {
            ArchKind::Cvfnn => Some(Activation::FullyComplexTanh),
            ArchKind::Scfnn => Some(Activation::SplitTanh),
            ArchKind::Mlmvn => Some(Activation::UnitCircle),
            _ => None,
        }
    }
}

/// Dense complex layer `f(W x + b)`; `weights` is row-major `outputs x inputs`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerceptronLayer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<ComplexScalar>,
    pub bias: Vec<ComplexScalar>,
}

#[derive(Clone, Debug)]
pub(crate) struct LayerTrace {
    pub input: Vec<ComplexScalar>,
    pub pre: Vec<ComplexScalar>,
    /// `max(|z|, eps)` per neuron; only filled for the unit-circle activation.
    pub mag: Vec<f64>,
    pub out: Vec<ComplexScalar>,
}

impl PerceptronLayer {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Self {
            inputs,
            outputs,
            weights: vec![ComplexScalar::ZERO; inputs.saturating_mul(outputs)],
            bias: vec![ComplexScalar::ZERO; outputs],
        }
    }

    /// Activated outputs for `x`.
    pub fn output(
        &self,
        activation: Activation,
        x: &[ComplexScalar],
        meter: &mut Meter,
    ) -> Result<Vec<ComplexScalar>> {
        super::check_len("input", self.inputs, x.len())?;
        Ok(self.forward(activation, x, meter)?.out)
    }

    /// One online step with this layer as the whole network. Returns the loss
    /// before the step.
    pub fn train(
        &mut self,
        activation: Activation,
        x: &[ComplexScalar],
        d: &[ComplexScalar],
        rate: f64,
        meter: &mut Meter,
    ) -> Result<f64> {
        super::check_len("input", self.inputs, x.len())?;
        super::check_len("target", self.outputs, d.len())?;
        let cfg = TrainConfig::uniform(rate);
        cfg.validate()?;
        let mut net = PerceptronNet {
            activation,
            layers: vec![self.clone()],
        };
        let (step, loss) = net.step(x, d, &cfg, meter)?;
        net.apply(&step);
        *self = net.layers.remove(0);
        Ok(loss)
    }

    fn rows(&self) -> impl Iterator<Item = &[ComplexScalar]> {
        self.weights.chunks(self.inputs)
    }

    /// `W x + b`: one complex product per weight.
    pub fn weighted_sums(&self, x: &[ComplexScalar], meter: &mut Meter) -> Vec<ComplexScalar> {
        self.rows()
            .zip(&self.bias)
            .map(|(row, &b)| {
                row.iter()
                    .zip(x)
                    .fold(b, |acc, (&w, &xi)| acc + meter.cmul(w, xi))
            })
            .collect()
    }

    pub(crate) fn forward(
        &self,
        activation: Activation,
        x: &[ComplexScalar],
        meter: &mut Meter,
    ) -> Result<LayerTrace> {
        let pre = self.weighted_sums(x, meter);
        let mut mag = Vec::new();
        let out = match activation {
            Activation::FullyComplexTanh => pre.iter().map(|z| z.tanh()).collect(),
            Activation::SplitTanh => pre
                .iter()
                .map(|z| ComplexScalar::new(z.re.tanh(), z.im.tanh()))
                .collect(),
            Activation::UnitCircle => {
                let mut out = Vec::with_capacity(pre.len());
                for &z in &pre {
                    let (y, m) = meter.unit_project(z, MVN_EPSILON)?;
                    out.push(y);
                    mag.push(m);
                }
                out
            }
        };
        Ok(LayerTrace {
            input: x.to_vec(),
            pre,
            mag,
            out,
        })
    }

    /// `g_j = sum_k conj(W_kj) delta_k`: one complex product per weight.
    pub(crate) fn backpropagate(
        &self,
        delta: &[ComplexScalar],
        meter: &mut Meter,
    ) -> Vec<ComplexScalar> {
        let mut g = vec![ComplexScalar::ZERO; self.inputs];
        for (row, &dk) in self.rows().zip(delta) {
            for (gj, &w) in g.iter_mut().zip(row) {
                *gj += meter.cmul(w.conj(), dk);
            }
        }
        g
    }

    /// Step `rate * coef_k * conj(x_i)` for every weight, `rate * coef_k` for
    /// every bias. The rate is fused into the counted product.
    pub(crate) fn update_step(
        &self,
        coef: &[ComplexScalar],
        x: &[ComplexScalar],
        rate: f64,
        meter: &mut Meter,
    ) -> PerceptronLayer {
        let mut step = PerceptronLayer::zeros(self.inputs, self.outputs);
        for ((row, b), &c) in step
            .weights
            .chunks_mut(self.inputs)
            .zip(step.bias.iter_mut())
            .zip(coef)
        {
            let scaled = fused_rate(c, rate);
            for (w, &xi) in row.iter_mut().zip(x) {
                *w = meter.cmul(scaled, xi.conj());
            }
            *b = scaled;
        }
        step
    }

    /// Descent signal through the activation at an output neuron, given
    /// `e = d - y`.
    fn output_delta(
        activation: Activation,
        y: ComplexScalar,
        e: ComplexScalar,
        meter: &mut Meter,
    ) -> ComplexScalar {
        match activation {
            // e * conj(1 - y^2)
            Activation::FullyComplexTanh => {
                let deriv = ComplexScalar::ONE - meter.cmul(y, y);
                meter.cmul(e, deriv.conj())
            }
            // component derivatives 1 - y_re^2, 1 - y_im^2 from the activation
            Activation::SplitTanh => {
                let dr = 1.0 - meter.rmul(y.re, y.re);
                let di = 1.0 - meter.rmul(y.im, y.im);
                wirtinger_pair(e, dr, di, meter)
            }
            Activation::UnitCircle => unreachable!("MLMVN is trained by error correction"),
        }
    }

    /// Descent signal through the activation at a hidden neuron, given the
    /// back-propagated signal `g`.
    fn hidden_delta(
        activation: Activation,
        z: ComplexScalar,
        h: ComplexScalar,
        g: ComplexScalar,
        meter: &mut Meter,
    ) -> Result<ComplexScalar> {
        Ok(match activation {
            Activation::FullyComplexTanh => {
                let deriv = ComplexScalar::ONE - meter.cmul(h, h);
                meter.cmul(g, deriv.conj())
            }
            // sech^2 of the cached pre-activation, as 1 / cosh^2
            Activation::SplitTanh => {
                let (cr, ci) = (z.re.cosh(), z.im.cosh());
                let cr2 = meter.rmul(cr, cr);
                let dr = meter.div_real(1.0, cr2)?;
                let ci2 = meter.rmul(ci, ci);
                let di = meter.div_real(1.0, ci2)?;
                wirtinger_pair(g, dr, di, meter)
            }
            Activation::UnitCircle => unreachable!("MLMVN is trained by error correction"),
        })
    }
}

/// Back-propagates `g` through a split activation with real component
/// derivatives `dr`, `di`, using its Wirtinger pair:
/// `delta = g * dh/dz + conj(g) * dh/dconj(z)` with `dh/dz = (dr + di) / 2` and
/// `dh/dconj(z) = (dr - di) / 2`. Two complex-by-real products.
fn wirtinger_pair(g: ComplexScalar, dr: f64, di: f64, meter: &mut Meter) -> ComplexScalar {
    let sum = meter.cscale(g, dr + di);
    let diff = meter.cscale(g.conj(), dr - di);
    (sum + diff).pow2_scale(-1)
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct PerceptronNet {
    pub activation: Activation,
    pub layers: Vec<PerceptronLayer>,
}

impl PerceptronNet {
    pub fn init(spec: &DeepSpec, rng: &mut InitRng) -> Self {
        let activation = Activation::for_arch(spec.arch).expect("perceptron architecture");
        let sizes = spec.layer_sizes();
        let layers = sizes
            .windows(2)
            .map(|w| {
                let (fan_in, n) = (w[0], w[1]);
                let mut layer = PerceptronLayer::zeros(fan_in, n);
                layer.weights = init::weights(rng, layer.weights.len(), fan_in);
                layer
            })
            .collect();
        Self { activation, layers }
    }

    pub fn forward(&self, x: &[ComplexScalar], meter: &mut Meter) -> Result<Vec<LayerTrace>> {
        let mut traces: Vec<LayerTrace> = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let input = traces.last().map_or(x, |t| t.out.as_slice());
            let trace = layer.forward(self.activation, input, meter)?;
            traces.push(trace);
        }
        Ok(traces)
    }

    pub fn infer(&self, x: &[ComplexScalar], meter: &mut Meter) -> Result<Vec<ComplexScalar>> {
        let mut traces = self.forward(x, meter)?;
        Ok(traces.pop().map(|t| t.out).unwrap_or_default())
    }

    pub fn step(
        &self,
        x: &[ComplexScalar],
        d: &[ComplexScalar],
        cfg: &TrainConfig,
        meter: &mut Meter,
    ) -> Result<(Self, f64)> {
        meter.set_phase(Phase::Forward);
        let traces = self.forward(x, meter)?;
        match self.activation {
            Activation::UnitCircle => self.error_correction_step(&traces, d, cfg, meter),
            _ => self.gradient_step(&traces, d, cfg, meter),
        }
    }

    /// Back-propagation of `1/2 |d - y|^2` (CVFNN, SCFNN).
    fn gradient_step(
        &self,
        traces: &[LayerTrace],
        d: &[ComplexScalar],
        cfg: &TrainConfig,
        meter: &mut Meter,
    ) -> Result<(Self, f64)> {
        let last = traces.len() - 1;
        let y = &traces[last].out;
        let e: Vec<ComplexScalar> = d.iter().zip(y).map(|(&d, &y)| d - y).collect();
        let loss = half_sq_norm(&e);

        meter.set_phase(Phase::BackwardDelta);
        let mut deltas: Vec<Vec<ComplexScalar>> = vec![Vec::new(); traces.len()];
        deltas[last] = y
            .iter()
            .zip(&e)
            .map(|(&y, &e)| PerceptronLayer::output_delta(self.activation, y, e, meter))
            .collect();
        for l in (0..last).rev() {
            let g = self.layers[l + 1].backpropagate(&deltas[l + 1], meter);
            let t = &traces[l];
            deltas[l] = t
                .pre
                .iter()
                .zip(&t.out)
                .zip(&g)
                .map(|((&z, &h), &g)| {
                    PerceptronLayer::hidden_delta(self.activation, z, h, g, meter)
                })
                .collect::<Result<_>>()?;
        }

        meter.set_phase(Phase::ParameterUpdate);
        let layers = self
            .layers
            .iter()
            .zip(traces)
            .zip(&deltas)
            .map(|((layer, t), delta)| layer.update_step(delta, &t.input, cfg.learning_rate, meter))
            .collect();
        Ok((
            Self {
                activation: self.activation,
                layers,
            },
            loss,
        ))
    }

    /// MLMVN error-correction learning.
    ///
    /// Output neuron `k`: the target is projected onto the unit circle,
    /// `d_k / |d_k|`, its error is `d_k/|d_k| - y_k`, and the rotation
    /// `(d_k/|d_k|) conj(y_k)` gives the angular error used for the tolerance
    /// gate and the reported loss.
    ///
    /// Hidden neuron `j` in layer `l`: the back-propagated error
    /// `sum_k conj(w_kj) delta_k` is shared by `s_l = fan_in + 1` (and by the
    /// output layer's `s_L` just below the output), giving `delta_j`. The virtual
    /// target `(y_j + delta_j)/|y_j + delta_j|` and its rotation against `y_j`
    /// give the angular gate. The correction coefficient is `delta_j / |z_j|`
    /// (self-adaptive rate).
    ///
    /// Weights move by `C / s_l * coef * conj(x)`; the constant factor is fused.
    fn error_correction_step(
        &self,
        traces: &[LayerTrace],
        d: &[ComplexScalar],
        cfg: &TrainConfig,
        meter: &mut Meter,
    ) -> Result<(Self, f64)> {
        let last = traces.len() - 1;
        let tol = cfg.angular_tolerance;
        let mut errors: Vec<Vec<ComplexScalar>> = vec![Vec::new(); traces.len()];
        let mut coefs: Vec<Vec<ComplexScalar>> = vec![Vec::new(); traces.len()];

        meter.set_phase(Phase::BackwardDelta);
        let mut angles = Vec::with_capacity(d.len());
        for (&dk, &yk) in d.iter().zip(&traces[last].out) {
            let (target, _) = meter.unit_project(dk, MVN_EPSILON)?;
            let angle = meter.cmul(target, yk.conj()).arg();
            let err = target - yk;
            errors[last].push(err);
            coefs[last].push(if angle.abs() >= tol {
                err
            } else {
                ComplexScalar::ZERO
            });
            angles.push(angle);
        }

        for l in (0..last).rev() {
            meter.set_phase(Phase::BackwardDelta);
            let g = self.layers[l + 1].backpropagate(&errors[l + 1], meter);
            let share = if l + 1 == last {
                share_of(&self.layers[l]).saturating_mul(share_of(&self.layers[last]))
            } else {
                share_of(&self.layers[l])
            };
            let t = &traces[l];
            let mut shared = Vec::with_capacity(g.len());
            let mut gated = Vec::with_capacity(g.len());
            for (j, &gj) in g.iter().enumerate() {
                meter.set_phase(Phase::BackwardDelta);
                let delta = meter.cdiv_real(gj, share as f64)?;
                let (virtual_target, _) = meter.unit_project(t.out[j] + delta, MVN_EPSILON)?;
                let angle = meter.cmul(virtual_target, t.out[j].conj()).arg();
                meter.set_phase(Phase::ParameterUpdate);
                let coef = meter.cdiv_real(delta, t.mag[j])?;
                shared.push(delta);
                gated.push(if angle.abs() >= tol {
                    coef
                } else {
                    ComplexScalar::ZERO
                });
            }
            errors[l] = shared;
            coefs[l] = gated;
        }

        meter.set_phase(Phase::ParameterUpdate);
        let layers = self
            .layers
            .iter()
            .zip(traces)
            .zip(&coefs)
            .map(|((layer, t), coef)| {
                let rate = rate_per_share(cfg.learning_rate, share_of(layer));
                layer.update_step(coef, &t.input, rate, meter)
            })
            .collect();
        Ok((
            Self {
                activation: self.activation,
                layers,
            },
            half_sum_sq(&angles),
        ))
    }

    pub fn apply(&mut self, step: &Self) {
        for (layer, s) in self.layers.iter_mut().zip(&step.layers) {
            add_complex(&mut layer.weights, &s.weights);
            add_complex(&mut layer.bias, &s.bias);
        }
    }

    pub fn flatten(&self, out: &mut Vec<f64>) {
        for layer in &self.layers {
            push_complex(out, &layer.weights);
            push_complex(out, &layer.bias);
        }
    }

    pub fn unflatten(&mut self, src: &mut &[f64]) {
        for layer in &mut self.layers {
            read_complex(src, &mut layer.weights);
            read_complex(src, &mut layer.bias);
        }
    }
}

/// `fan_in + 1`: the number of weights (bias included) sharing a neuron's error.
fn share_of(layer: &PerceptronLayer) -> usize {
    layer.inputs.saturating_add(1)
}
