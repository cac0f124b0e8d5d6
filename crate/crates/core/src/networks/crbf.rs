//! C-RBF: real Gaussian kernels on complex inputs, complex output weights.
//!
//! `phi_n = exp(-|x - c_n|^2 / v_n)`, `y_r = sum_n W_rn phi_n + b_r`. Widths are
//! stored as the variance `v_n`.

use crate::cost_model::ShallowSpec;
use crate::numerics::{fused_rate, fused_rate_real, half_sq_norm, ComplexScalar, Meter, Phase};

use super::init::{self, InitRng};
use super::{
    add_complex, add_real_floored, push_complex, read_complex, read_real, Result, TrainConfig,
    WIDTH_FLOOR,
};

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct CrbfNet {
    pub inputs: usize,
    pub centers: Vec<ComplexScalar>,
    pub widths: Vec<f64>,
    pub weights: Vec<ComplexScalar>,
    pub bias: Vec<ComplexScalar>,
}

struct Hidden {
    diffs: Vec<ComplexScalar>,
    dist: Vec<f64>,
    phi: Vec<f64>,
}

impl CrbfNet {
    pub fn init(spec: &ShallowSpec, rng: &mut InitRng) -> Self {
        let (p, n, r) = (spec.inputs, spec.neurons, spec.outputs);
        Self {
            inputs: p,
            centers: init::centers(rng, n.saturating_mul(p)),
            widths: vec![1.0; n],
            weights: init::weights(rng, r.saturating_mul(n), n),
            bias: vec![ComplexScalar::ZERO; r],
        }
    }

    fn hidden(&self, x: &[ComplexScalar], meter: &mut Meter) -> Result<Hidden> {
        let mut h = Hidden {
            diffs: Vec::with_capacity(self.centers.len()),
            dist: Vec::new(),
            phi: Vec::new(),
        };
        for (row, &v) in self.centers.chunks(self.inputs).zip(&self.widths) {
            let mut dist = 0.0;
            for (&c, &xi) in row.iter().zip(x) {
                let delta = xi - c;
                dist += meter.sqmag(delta);
                h.diffs.push(delta);
            }
            let q = meter.div_real(dist, v)?;
            h.dist.push(dist);
            h.phi.push((-q).exp());
        }
        Ok(h)
    }

    fn output(&self, phi: &[f64], meter: &mut Meter) -> Vec<ComplexScalar> {
        self.weights
            .chunks(phi.len())
            .zip(&self.bias)
            .map(|(row, &b)| {
                row.iter()
                    .zip(phi)
                    .fold(b, |acc, (&w, &f)| acc + meter.cscale(w, f))
            })
            .collect()
    }

    pub fn activations(
        &self,
        x: &[ComplexScalar],
        meter: &mut Meter,
    ) -> Result<Vec<ComplexScalar>> {
        Ok(self
            .hidden(x, meter)?
            .phi
            .into_iter()
            .map(ComplexScalar::from_real)
            .collect())
    }

    pub fn infer(&self, x: &[ComplexScalar], meter: &mut Meter) -> Result<Vec<ComplexScalar>> {
        let h = self.hidden(x, meter)?;
        Ok(self.output(&h.phi, meter))
    }

    pub fn step(
        &self,
        x: &[ComplexScalar],
        d: &[ComplexScalar],
        cfg: &TrainConfig,
        meter: &mut Meter,
    ) -> Result<(Self, f64)> {
        meter.set_phase(Phase::Forward);
        let h = self.hidden(x, meter)?;
        let y = self.output(&h.phi, meter);
        let e: Vec<ComplexScalar> = d.iter().zip(&y).map(|(&d, &y)| d - y).collect();
        let loss = half_sq_norm(&e);
        let n = self.widths.len();

        meter.set_phase(Phase::ParameterUpdate);
        let mut step = Self {
            inputs: self.inputs,
            centers: Vec::with_capacity(self.centers.len()),
            widths: Vec::with_capacity(n),
            weights: Vec::with_capacity(self.weights.len()),
            bias: Vec::with_capacity(e.len()),
        };
        for &er in &e {
            let ew = meter.cscale(er, cfg.weight_rate);
            step.bias.push(meter.cscale(er, cfg.bias_rate));
            step.weights
                .extend(h.phi.iter().map(|&f| meter.cscale(ew, f)));
        }

        // g_n = sum_r Re(W_rn conj(e_r)) = -dL/dphi_n
        meter.set_phase(Phase::BackwardDelta);
        let mut g = vec![0.0; n];
        for (row, &er) in self.weights.chunks(n).zip(&e) {
            for (gn, &w) in g.iter_mut().zip(row) {
                *gn += meter.rmul(w.re, er.re) + meter.rmul(w.im, er.im);
            }
        }
        let mut t = Vec::with_capacity(n);
        for ((&gn, &f), &v) in g.iter().zip(&h.phi).zip(&self.widths) {
            let s = meter.rmul(gn, f);
            t.push(meter.div_real(s, v)?);
        }

        meter.set_phase(Phase::ParameterUpdate);
        for ((&tn, &dist), &v) in t.iter().zip(&h.dist).zip(&self.widths) {
            let td = meter.rmul(tn, dist);
            step.widths
                .push(fused_rate_real(meter.div_real(td, v)?, cfg.width_rate));
        }
        for (diffs, &tn) in h.diffs.chunks(self.inputs).zip(&t) {
            step.centers.extend(
                diffs.iter().map(|&delta| {
                    fused_rate(meter.cscale(delta, tn), cfg.center_rate).pow2_scale(1)
                }),
            );
        }
        Ok((step, loss))
    }

    pub fn apply(&mut self, step: &Self) {
        add_complex(&mut self.centers, &step.centers);
        add_real_floored(&mut self.widths, &step.widths, WIDTH_FLOOR);
        add_complex(&mut self.weights, &step.weights);
        add_complex(&mut self.bias, &step.bias);
    }

    pub fn flatten(&self, out: &mut Vec<f64>) {
        push_complex(out, &self.centers);
        out.extend_from_slice(&self.widths);
        push_complex(out, &self.weights);
        push_complex(out, &self.bias);
    }

    pub fn unflatten(&mut self, src: &mut &[f64]) {
        read_complex(src, &mut self.centers);
        read_real(src, &mut self.widths);
        read_complex(src, &mut self.weights);
        read_complex(src, &mut self.bias);
    }
}
