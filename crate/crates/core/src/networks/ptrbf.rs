//! PT-RBF: phase-transmittance RBF layers, optionally stacked.
//!
//! Each layer maps its input `x` through Gaussian kernels applied separately to
//! the real and imaginary parts,
//! `phi_n = exp(-|Re(x - c_n)|^2 / vr_n) + i exp(-|Im(x - c_n)|^2 / vi_n)`,
//! then through a complex projection `y = W phi + b`. The projection output
//! feeds the next layer.

use crate::cost_model::DeepSpec;
use crate::numerics::{fused_rate, fused_rate_real, half_sq_norm, ComplexScalar, Meter, Phase};

use super::init::{self, InitRng};
use super::{
    add_complex, add_real_floored, push_complex, read_complex, read_real, Result, TrainConfig,
    WIDTH_FLOOR,
};

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct PtLayer {
    pub inputs: usize,
    pub centers: Vec<ComplexScalar>,
    pub var_re: Vec<f64>,
    pub var_im: Vec<f64>,
    pub weights: Vec<ComplexScalar>,
    pub bias: Vec<ComplexScalar>,
}

struct Hidden {
    input: Vec<ComplexScalar>,
    diffs: Vec<ComplexScalar>,
    dist_re: Vec<f64>,
    dist_im: Vec<f64>,
    phi: Vec<ComplexScalar>,
    out: Vec<ComplexScalar>,
}

impl PtLayer {
    fn init(inputs: usize, neurons: usize, outputs: usize, rng: &mut InitRng) -> Self {
        Self {
            inputs,
            centers: init::centers(rng, neurons.saturating_mul(inputs)),
            var_re: vec![1.0; neurons],
            var_im: vec![1.0; neurons],
            weights: init::weights(rng, outputs.saturating_mul(neurons), neurons),
            bias: vec![ComplexScalar::ZERO; outputs],
        }
    }

    fn neurons(&self) -> usize {
        self.var_re.len()
    }

    fn forward(&self, x: &[ComplexScalar], meter: &mut Meter) -> Result<Hidden> {
        let n = self.neurons();
        let mut h = Hidden {
            input: x.to_vec(),
            diffs: Vec::with_capacity(self.centers.len()),
            dist_re: Vec::with_capacity(n),
            dist_im: Vec::with_capacity(n),
            phi: Vec::with_capacity(n),
            out: Vec::new(),
        };
        for ((row, &vr), &vi) in self
            .centers
            .chunks(self.inputs)
            .zip(&self.var_re)
            .zip(&self.var_im)
        {
            let (mut dr, mut di) = (0.0, 0.0);
            for (&c, &xi) in row.iter().zip(x) {
                let delta = xi - c;
                dr += meter.rmul(delta.re, delta.re);
                di += meter.rmul(delta.im, delta.im);
                h.diffs.push(delta);
            }
            let qr = meter.div_real(dr, vr)?;
            let qi = meter.div_real(di, vi)?;
            h.dist_re.push(dr);
            h.dist_im.push(di);
            h.phi.push(ComplexScalar::new((-qr).exp(), (-qi).exp()));
        }
        h.out = self
            .weights
            .chunks(n)
            .zip(&self.bias)
            .map(|(row, &b)| {
                row.iter()
                    .zip(&h.phi)
                    .fold(b, |acc, (&w, &f)| acc + meter.cmul(w, f))
            })
            .collect();
        Ok(h)
    }

    pub fn activations(
        &self,
        x: &[ComplexScalar],
        meter: &mut Meter,
    ) -> Result<Vec<ComplexScalar>> {
        Ok(self.forward(x, meter)?.phi)
    }

    /// Parameter step for descent signal `eps` at the layer output. Returns the
    /// step and, if `propagate`, the descent signal at the layer input.
    fn step(
        &self,
        h: &Hidden,
        eps: &[ComplexScalar],
        propagate: bool,
        cfg: &TrainConfig,
        meter: &mut Meter,
    ) -> Result<(Self, Option<Vec<ComplexScalar>>)> {
        let n = self.neurons();
        let mut step = Self {
            inputs: self.inputs,
            centers: Vec::with_capacity(self.centers.len()),
            var_re: Vec::with_capacity(n),
            var_im: Vec::with_capacity(n),
            weights: Vec::with_capacity(self.weights.len()),
            bias: Vec::with_capacity(eps.len()),
        };

        meter.set_phase(Phase::ParameterUpdate);
        for &eo in eps {
            let ew = meter.cscale(eo, cfg.weight_rate);
            step.bias.push(meter.cscale(eo, cfg.bias_rate));
            step.weights
                .extend(h.phi.iter().map(|&f| meter.cmul(ew, f.conj())));
        }

        meter.set_phase(Phase::BackwardDelta);
        let mut g = vec![ComplexScalar::ZERO; n];
        for (row, &eo) in self.weights.chunks(n).zip(eps) {
            for (gn, &w) in g.iter_mut().zip(row) {
                *gn += meter.cmul(w.conj(), eo);
            }
        }
        // Hadamard product of g and phi, component by component
        let mut t = Vec::with_capacity(n);
        for (((&gn, &f), &vr), &vi) in g.iter().zip(&h.phi).zip(&self.var_re).zip(&self.var_im) {
            let sr = meter.cscale(gn, f.re).re;
            let si = meter.cscale(gn, f.im).im;
            t.push((meter.div_real(sr, vr)?, meter.div_real(si, vi)?));
        }

        let eps_in = if propagate {
            let mut acc = vec![ComplexScalar::ZERO; self.inputs];
            for (diffs, &(tr, ti)) in h.diffs.chunks(self.inputs).zip(&t) {
                for (a, &delta) in acc.iter_mut().zip(diffs) {
                    *a -= meter.cscale(delta, tr + ti) + meter.cscale(delta.conj(), tr - ti);
                }
            }
            Some(acc)
        } else {
            None
        };

        meter.set_phase(Phase::ParameterUpdate);
        for (i, &(tr, ti)) in t.iter().enumerate() {
            let sr = meter.rmul(tr, h.dist_re[i]);
            step.var_re.push(fused_rate_real(
                meter.div_real(sr, self.var_re[i])?,
                cfg.width_rate,
            ));
            let si = meter.rmul(ti, h.dist_im[i]);
            step.var_im.push(fused_rate_real(
                meter.div_real(si, self.var_im[i])?,
                cfg.width_rate,
            ));
        }
        for (diffs, &(tr, ti)) in h.diffs.chunks(self.inputs).zip(&t) {
            for &delta in diffs {
                let dc = ComplexScalar::new(meter.rmul(tr, delta.re), meter.rmul(ti, delta.im));
                step.centers
                    .push(fused_rate(dc, cfg.center_rate).pow2_scale(1));
            }
        }
        Ok((step, eps_in))
    }

    fn apply(&mut self, step: &Self) {
        add_complex(&mut self.centers, &step.centers);
        add_real_floored(&mut self.var_re, &step.var_re, WIDTH_FLOOR);
        add_real_floored(&mut self.var_im, &step.var_im, WIDTH_FLOOR);
        add_complex(&mut self.weights, &step.weights);
        add_complex(&mut self.bias, &step.bias);
    }

    fn flatten(&self, out: &mut Vec<f64>) {
        push_complex(out, &self.centers);
        out.extend_from_slice(&self.var_re);
        out.extend_from_slice(&self.var_im);
        push_complex(out, &self.weights);
        push_complex(out, &self.bias);
    }

    fn unflatten(&mut self, src: &mut &[f64]) {
        read_complex(src, &mut self.centers);
        read_real(src, &mut self.var_re);
        read_real(src, &mut self.var_im);
        read_complex(src, &mut self.weights);
        read_complex(src, &mut self.bias);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct PtrbfNet {
    pub layers: Vec<PtLayer>,
}

impl PtrbfNet {
    pub fn init(spec: &DeepSpec, rng: &mut InitRng) -> Self {
        let outs = spec
            .bottleneck_sizes()
            .expect("PT-RBF spec has bottlenecks");
        let mut inputs = spec.inputs;
        let layers = spec
            .neurons
            .iter()
            .zip(outs.iter().skip(1))
            .map(|(&n, &o)| {
                let layer = PtLayer::init(inputs, n, o, rng);
                inputs = o;
                layer
            })
            .collect();
        Self { layers }
    }

    fn forward(&self, x: &[ComplexScalar], meter: &mut Meter) -> Result<Vec<Hidden>> {
        let mut hs: Vec<Hidden> = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let input = hs.last().map_or(x, |h| h.out.as_slice());
            let h = layer.forward(input, meter)?;
            hs.push(h);
        }
        Ok(hs)
    }

    pub fn infer(&self, x: &[ComplexScalar], meter: &mut Meter) -> Result<Vec<ComplexScalar>> {
        Ok(self
            .forward(x, meter)?
            .pop()
            .map(|h| h.out)
            .unwrap_or_default())
    }

    pub fn step(
        &self,
        x: &[ComplexScalar],
        d: &[ComplexScalar],
        cfg: &TrainConfig,
        meter: &mut Meter,
    ) -> Result<(Self, f64)> {
        meter.set_phase(Phase::Forward);
        let hs = self.forward(x, meter)?;
        let y = &hs[hs.len() - 1].out;
        let mut eps: Vec<ComplexScalar> = d.iter().zip(y).map(|(&d, &y)| d - y).collect();
        let loss = half_sq_norm(&eps);

        let mut steps = Vec::with_capacity(self.layers.len());
        for (l, (layer, h)) in self.layers.iter().zip(&hs).enumerate().rev() {
            let (step, below) = layer.step(h, &eps, l > 0, cfg, meter)?;
            steps.push(step);
            if let Some(below) = below {
                eps = below;
            }
        }
        steps.reverse();
        debug_assert!(hs
            .iter()
            .zip(&self.layers)
            .all(|(h, l)| h.input.len() == l.inputs));
        Ok((Self { layers: steps }, loss))
    }

    pub fn apply(&mut self, step: &Self) {
        for (layer, s) in self.layers.iter_mut().zip(&step.layers) {
            layer.apply(s);
        }
    }

    pub fn flatten(&self, out: &mut Vec<f64>) {
        for layer in &self.layers {
            layer.flatten(out);
        }
    }

    pub fn unflatten(&mut self, src: &mut &[f64]) {
        for layer in &mut self.layers {
            layer.unflatten(src);
        }
    }
}
