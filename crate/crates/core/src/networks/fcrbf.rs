//! FC-RBF: fully complex kernels `phi_n = sech(sum_p v_np (x_p - c_np))` with
//! complex output weights.

use crate::cost_model::ShallowSpec;
use crate::numerics::{fused_rate, half_sq_norm, ComplexScalar, Meter, Phase};

use super::init::{self, InitRng};
use super::{add_complex, push_complex, read_complex, Result, TrainConfig};

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct FcrbfNet {
    pub inputs: usize,
    pub centers: Vec<ComplexScalar>,
    /// Complex input scalings, one per center component.
    pub scalings: Vec<ComplexScalar>,
    pub weights: Vec<ComplexScalar>,
    pub bias: Vec<ComplexScalar>,
}

struct Hidden {
    diffs: Vec<ComplexScalar>,
    u: Vec<ComplexScalar>,
    phi: Vec<ComplexScalar>,
}

impl FcrbfNet {
    pub fn init(spec: &ShallowSpec, rng: &mut InitRng) -> Self {
        let (p, n, r) = (spec.inputs, spec.neurons, spec.outputs);
        Self {
            inputs: p,
            centers: init::centers(rng, n.saturating_mul(p)),
            scalings: init::weights(rng, n.saturating_mul(p), p),
            weights: init::weights(rng, r.saturating_mul(n), n),
            bias: vec![ComplexScalar::ZERO; r],
        }
    }

    fn hidden(&self, x: &[ComplexScalar], meter: &mut Meter) -> Hidden {
        let mut h = Hidden {
            diffs: Vec::with_capacity(self.centers.len()),
            u: Vec::new(),
            phi: Vec::new(),
        };
        for (centers, scalings) in self
            .centers
            .chunks(self.inputs)
            .zip(self.scalings.chunks(self.inputs))
        {
            let mut u = ComplexScalar::ZERO;
            for ((&c, &v), &xi) in centers.iter().zip(scalings).zip(x) {
                let delta = xi - c;
                u += meter.cmul(v, delta);
                h.diffs.push(delta);
            }
            h.u.push(u);
            h.phi.push(u.sech());
        }
        h
    }

    fn output(&self, phi: &[ComplexScalar], meter: &mut Meter) -> Vec<ComplexScalar> {
        self.weights
            .chunks(phi.len())
            .zip(&self.bias)
            .map(|(row, &b)| {
                row.iter()
                    .zip(phi)
                    .fold(b, |acc, (&w, &f)| acc + meter.cmul(w, f))
            })
            .collect()
    }

    pub fn activations(&self, x: &[ComplexScalar], meter: &mut Meter) -> Vec<ComplexScalar> {
        self.hidden(x, meter).phi
    }

    pub fn infer(&self, x: &[ComplexScalar], meter: &mut Meter) -> Result<Vec<ComplexScalar>> {
        let h = self.hidden(x, meter);
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
        let h = self.hidden(x, meter);
        let y = self.output(&h.phi, meter);
        let e: Vec<ComplexScalar> = d.iter().zip(&y).map(|(&d, &y)| d - y).collect();
        let loss = half_sq_norm(&e);
        let n = h.phi.len();

        meter.set_phase(Phase::ParameterUpdate);
        let mut step = Self {
            inputs: self.inputs,
            centers: Vec::with_capacity(self.centers.len()),
            scalings: Vec::with_capacity(self.scalings.len()),
            weights: Vec::with_capacity(self.weights.len()),
            bias: Vec::with_capacity(e.len()),
        };
        for &er in &e {
            let ew = meter.cscale(er, cfg.weight_rate);
            step.bias.push(meter.cscale(er, cfg.bias_rate));
            step.weights
                .extend(h.phi.iter().map(|&f| meter.cmul(ew, f.conj())));
        }

        meter.set_phase(Phase::BackwardDelta);
        let mut g = vec![ComplexScalar::ZERO; n];
        for (row, &er) in self.weights.chunks(n).zip(&e) {
            for (gn, &w) in g.iter_mut().zip(row) {
                *gn += meter.cmul(w.conj(), er);
            }
        }
        // sech'(u) = -sech(u)^2 sinh(u)
        let delta: Vec<ComplexScalar> = g
            .iter()
            .zip(&h.phi)
            .zip(&h.u)
            .map(|((&gn, &f), &u)| {
                let sq = meter.cmul(f, f);
                let deriv = -meter.cmul(sq, u.sinh());
                meter.cmul(gn, deriv.conj())
            })
            .collect();

        meter.set_phase(Phase::ParameterUpdate);
        for ((diffs, scalings), &dn) in h
            .diffs
            .chunks(self.inputs)
            .zip(self.scalings.chunks(self.inputs))
            .zip(&delta)
        {
            let dv = fused_rate(dn, cfg.width_rate);
            let dc = fused_rate(dn, cfg.center_rate);
            for (&diff, &v) in diffs.iter().zip(scalings) {
                step.scalings.push(meter.cmul(dv, diff.conj()));
                step.centers.push(-meter.cmul(dc, v.conj()));
            }
        }
        Ok((step, loss))
    }

    pub fn apply(&mut self, step: &Self) {
        add_complex(&mut self.centers, &step.centers);
        add_complex(&mut self.scalings, &step.scalings);
        add_complex(&mut self.weights, &step.weights);
        add_complex(&mut self.bias, &step.bias);
    }

    pub fn flatten(&self, out: &mut Vec<f64>) {
        push_complex(out, &self.centers);
        push_complex(out, &self.scalings);
        push_complex(out, &self.weights);
        push_complex(out, &self.bias);
    }

    pub fn unflatten(&mut self, src: &mut &[f64]) {
        read_complex(src, &mut self.centers);
        read_complex(src, &mut self.scalings);
        read_complex(src, &mut self.weights);
        read_complex(src, &mut self.bias);
    }
}
