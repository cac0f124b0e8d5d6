//! Executable CVNN architectures with metered arithmetic.
//!
//! Every multiplication in inference and training goes through
//! [`Meter`](crate::numerics::Meter), so the meter delta of
//! [`Network::infer`] and [`Network::train_step`] can be compared against the
//! closed forms in [`cost_model`](crate::cost_model). The per-architecture
//! multiplication inventories are listed in `docs/decomposition.md`.

mod crbf;
mod fcrbf;
mod init;
mod mvn;
mod perceptron;
mod ptrbf;

use thiserror::Error;

use crate::cost_model::{ArchKind, CostError, DeepSpec, NetworkSpec, ShallowSpec};
use crate::numerics::{ComplexScalar, Meter, NumericsError, Phase};

pub use mvn::{mvn_correct, MvnNeuron};
pub use perceptron::{Activation, PerceptronLayer};

/// Lower bound applied to RBF widths (variances) after every update.
pub const WIDTH_FLOOR: f64 = 1e-6;
/// Magnitude guard for unit-circle projections.
pub const MVN_EPSILON: f64 = 1e-30;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error(transparent)]
    Spec(#[from] CostError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("{what}: expected length {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("non-finite {0}")]
    NonFinite(&'static str),
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
}

pub(crate) type Result<T, E = NetworkError> = std::result::Result<T, E>;

/// Learning rates for one online step.
///
/// The perceptron family uses `learning_rate` (for MLMVN it is the
/// error-correction constant). The RBF family uses the per-group rates;
/// for FC-RBF `width_rate` drives the complex input scalings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub weight_rate: f64,
    pub bias_rate: f64,
    pub center_rate: f64,
    pub width_rate: f64,
    /// MLMVN neurons whose angular error is below this many radians are not
    /// corrected.
    pub angular_tolerance: f64,
}

impl TrainConfig {
    pub fn uniform(rate: f64) -> Self {
        Self {
            learning_rate: rate,
            weight_rate: rate,
            bias_rate: rate,
            center_rate: rate,
            width_rate: rate,
            angular_tolerance: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("learning_rate", self.learning_rate),
            ("weight_rate", self.weight_rate),
            ("bias_rate", self.bias_rate),
            ("center_rate", self.center_rate),
            ("width_rate", self.width_rate),
        ];
        for (name, r) in rates {
            if !(r.is_finite() && r > 0.0) {
                return Err(NetworkError::InvalidConfig(format!(
                    "{name} must be finite and positive, got {r}"
                )));
            }
        }
        if !(self.angular_tolerance.is_finite() && self.angular_tolerance >= 0.0) {
            return Err(NetworkError::InvalidConfig(
                "angular_tolerance must be finite and >= 0".into(),
            ));
        }
        Ok(())
    }
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self::uniform(0.01)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Model {
    Perceptron(perceptron::PerceptronNet),
    Crbf(crbf::CrbfNet),
    Fcrbf(fcrbf::FcrbfNet),
    Ptrbf(ptrbf::PtrbfNet),
}

/// A CVNN of one of the six architectures, with its parameters.
/// `(pre-activations, activations)` of one layer.
pub type LayerValues = (Vec<ComplexScalar>, Vec<ComplexScalar>);

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    spec: NetworkSpec,
    model: Model,
}

impl Network {
    /// Builds a network with deterministic parameters for `(spec, seed)`.
    pub fn build(spec: impl Into<NetworkSpec>, seed: u64) -> Result<Self> {
        let spec = spec.into();
        spec.validate()?;
        let mut rng = init::rng(seed);
        let model = match &spec {
            NetworkSpec::Shallow(s) => match s.arch {
                ArchKind::Cvfnn | ArchKind::Scfnn | ArchKind::Mlmvn => {
                    let deep = DeepSpec::from_shallow(s)?;
                    Model::Perceptron(perceptron::PerceptronNet::init(&deep, &mut rng))
                }
                ArchKind::Crbf => Model::Crbf(crbf::CrbfNet::init(s, &mut rng)),
                ArchKind::Fcrbf => Model::Fcrbf(fcrbf::FcrbfNet::init(s, &mut rng)),
                ArchKind::Ptrbf => {
                    Model::Ptrbf(ptrbf::PtrbfNet::init(&DeepSpec::from_shallow(s)?, &mut rng))
                }
            },
            NetworkSpec::Deep(d) => match d.arch {
                ArchKind::Ptrbf => Model::Ptrbf(ptrbf::PtrbfNet::init(d, &mut rng)),
                a if a.is_perceptron() => {
                    Model::Perceptron(perceptron::PerceptronNet::init(d, &mut rng))
                }
                a => return Err(CostError::NotApplicable(a).into()),
            },
        };
        Ok(Self { spec, model })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn arch(&self) -> ArchKind {
        self.spec.arch()
    }

    /// True for architectures trained by gradient descent on `1/2 |d - y|^2`
    /// (all but MLMVN).
    pub fn is_gradient_family(&self) -> bool {
        self.arch() != ArchKind::Mlmvn
    }

    /// One forward pass. Runs under [`Phase::Forward`].
    pub fn infer(&self, x: &[ComplexScalar], meter: &mut Meter) -> Result<Vec<ComplexScalar>> {
        check_len("input", self.spec.inputs(), x.len())?;
        meter.set_phase(Phase::Forward);
        let y = match &self.model {
            Model::Perceptron(m) => m.infer(x, meter)?,
            Model::Crbf(m) => m.infer(x, meter)?,
            Model::Fcrbf(m) => m.infer(x, meter)?,
            Model::Ptrbf(m) => m.infer(x, meter)?,
        };
        if y.iter().any(|z| !z.is_finite()) {
            return Err(NetworkError::NonFinite("network output"));
        }
        Ok(y)
    }

    /// One online training step on `(x, d)`. Returns the loss before the update:
    /// `1/2 |d - y|^2`, or for MLMVN half the summed squared angular error.
    pub fn train_step(
        &mut self,
        x: &[ComplexScalar],
        d: &[ComplexScalar],
        cfg: &TrainConfig,
        meter: &mut Meter,
    ) -> Result<f64> {
        let (step, loss) = self.compute_step(x, d, cfg, meter)?;
        match (&mut self.model, step) {
            (Model::Perceptron(m), Model::Perceptron(s)) => m.apply(&s),
            (Model::Crbf(m), Model::Crbf(s)) => m.apply(&s),
            (Model::Fcrbf(m), Model::Fcrbf(s)) => m.apply(&s),
            (Model::Ptrbf(m), Model::Ptrbf(s)) => m.apply(&s),
            _ => unreachable!("step has the model's own shape"),
        }
        Ok(loss)
    }

    /// The parameter step `train_step` would apply, flattened like
    /// [`Network::parameters`], plus the loss. With unit rates this is the
    /// negative gradient for the gradient family.
    pub fn descent_step(
        &self,
        x: &[ComplexScalar],
        d: &[ComplexScalar],
        cfg: &TrainConfig,
        meter: &mut Meter,
    ) -> Result<(Vec<f64>, f64)> {
        let (step, loss) = self.compute_step(x, d, cfg, meter)?;
        let mut flat = Vec::with_capacity(self.parameter_count());
        step.flatten(&mut flat);
        Ok((flat, loss))
    }

    fn compute_step(
        &self,
        x: &[ComplexScalar],
        d: &[ComplexScalar],
        cfg: &TrainConfig,
        meter: &mut Meter,
    ) -> Result<(Model, f64)> {
        check_len("input", self.spec.inputs(), x.len())?;
        check_len("target", self.spec.outputs(), d.len())?;
        cfg.validate()?;
        let (step, loss) = match &self.model {
            Model::Perceptron(m) => {
                let (s, l) = m.step(x, d, cfg, meter)?;
                (Model::Perceptron(s), l)
            }
            Model::Crbf(m) => {
                let (s, l) = m.step(x, d, cfg, meter)?;
                (Model::Crbf(s), l)
            }
            Model::Fcrbf(m) => {
                let (s, l) = m.step(x, d, cfg, meter)?;
                (Model::Fcrbf(s), l)
            }
            Model::Ptrbf(m) => {
                let (s, l) = m.step(x, d, cfg, meter)?;
                (Model::Ptrbf(s), l)
            }
        };
        if !loss.is_finite() {
            return Err(NetworkError::NonFinite("loss"));
        }
        Ok((step, loss))
    }

    /// `1/2 |d - y|^2` at the current parameters, evaluated on a scratch meter.
    pub fn loss(&self, x: &[ComplexScalar], d: &[ComplexScalar]) -> Result<f64> {
        check_len("target", self.spec.outputs(), d.len())?;
        let y = self.infer(x, &mut Meter::new())?;
        let e: Vec<ComplexScalar> = d.iter().zip(&y).map(|(&d, &y)| d - y).collect();
        Ok(crate::numerics::half_sq_norm(&e))
    }

    /// All real parameter components (real and imaginary parts separately) in
    /// a fixed architecture-specific order.
    pub fn parameters(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.model.flatten(&mut out);
        out
    }

    pub fn parameter_count(&self) -> usize {
        self.parameters().len()
    }

    pub fn set_parameters(&mut self, values: &[f64]) -> Result<()> {
        check_len("parameter vector", self.parameter_count(), values.len())?;
        let mut src = values;
        self.model.unflatten(&mut src);
        Ok(())
    }

    /// Perceptron layers, if this is a CVFNN, SCFNN or MLMVN.
    pub fn perceptron_layers(&self) -> Option<&[PerceptronLayer]> {
        match &self.model {
            Model::Perceptron(m) => Some(&m.layers),
            _ => None,
        }
    }

    /// RBF widths: one variance per neuron for C-RBF, a `(real, imaginary)`
    /// variance pair per neuron and layer for PT-RBF.
    pub fn rbf_widths(&self) -> Option<Vec<f64>> {
        match &self.model {
            Model::Crbf(m) => Some(m.widths.clone()),
            Model::Ptrbf(m) => Some(
                m.layers
                    .iter()
                    .flat_map(|l| l.var_re.iter().chain(&l.var_im).copied())
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Hidden activations of the first Gaussian layer for RBF networks.
    pub fn rbf_activations(&self, x: &[ComplexScalar]) -> Result<Option<Vec<ComplexScalar>>> {
        check_len("input", self.spec.inputs(), x.len())?;
        let mut scratch = Meter::new();
        Ok(match &self.model {
            Model::Crbf(m) => Some(m.activations(x, &mut scratch)?),
            Model::Fcrbf(m) => Some(m.activations(x, &mut scratch)),
            Model::Ptrbf(m) => Some(m.layers[0].activations(x, &mut scratch)?),
            Model::Perceptron(_) => None,
        })
    }

    /// Pre-activations and activations of every perceptron layer.
    pub fn perceptron_trace(&self, x: &[ComplexScalar]) -> Result<Option<Vec<LayerValues>>> {
        check_len("input", self.spec.inputs(), x.len())?;
        match &self.model {
            Model::Perceptron(m) => {
                let traces = m.forward(x, &mut Meter::new())?;
                Ok(Some(traces.into_iter().map(|t| (t.pre, t.out)).collect()))
            }
            _ => Ok(None),
        }
    }
}

impl Model {
    fn flatten(&self, out: &mut Vec<f64>) {
        match self {
            Model::Perceptron(m) => m.flatten(out),
            Model::Crbf(m) => m.flatten(out),
            Model::Fcrbf(m) => m.flatten(out),
            Model::Ptrbf(m) => m.flatten(out),
        }
    }

    fn unflatten(&mut self, src: &mut &[f64]) {
        match self {
            Model::Perceptron(m) => m.unflatten(src),
            Model::Crbf(m) => m.unflatten(src),
            Model::Fcrbf(m) => m.unflatten(src),
            Model::Ptrbf(m) => m.unflatten(src),
        }
    }
}

/// Shallow spec helper for tests and demos.
pub fn shallow(
    arch: ArchKind,
    inputs: usize,
    outputs: usize,
    neurons: usize,
) -> Result<NetworkSpec> {
    Ok(ShallowSpec::new(arch, inputs, outputs, neurons)?.into())
}

fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(NetworkError::Dimension {
            what,
            expected,
            got,
        });
    }
    Ok(())
}

fn push_complex(out: &mut Vec<f64>, values: &[ComplexScalar]) {
    out.extend(values.iter().flat_map(|z| [z.re, z.im]));
}

fn read_complex(src: &mut &[f64], values: &mut [ComplexScalar]) {
    for z in values.iter_mut() {
        *z = ComplexScalar::new(src[0], src[1]);
        *src = &src[2..];
    }
}

fn read_real(src: &mut &[f64], values: &mut [f64]) {
    let (head, tail) = src.split_at(values.len());
    values.copy_from_slice(head);
    *src = tail;
}

fn add_complex(target: &mut [ComplexScalar], step: &[ComplexScalar]) {
    for (t, s) in target.iter_mut().zip(step) {
        *t += *s;
    }
}

fn add_real_floored(target: &mut [f64], step: &[f64], floor: f64) {
    for (t, s) in target.iter_mut().zip(step) {
        *t = (*t + *s).max(floor);
    }
}
