//! Turning flags or a run-config file into a network spec.

use std::path::Path;

use serde::Deserialize;

use cvnn_core::{ArchKind, CostError, DeepSpec, Mode, NetworkSpec, ShallowSpec};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Training,
    Inference,
    Both,
}

impl ModeArg {
    pub fn modes(self) -> Vec<Mode> {
        match self {
            ModeArg::Training => vec![Mode::Training],
            ModeArg::Inference => vec![Mode::Inference],
            ModeArg::Both => Mode::ALL.to_vec(),
        }
    }
}

/// A single count for shallow networks, a list of layer sizes for deep ones.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Neurons {
    Count(usize),
    Layers(Vec<usize>),
}

impl std::str::FromStr for Neurons {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("'{s}' is not a count or a comma-separated list"))
            })
            .collect::<Result<_, _>>()?;
        Ok(if s.contains(',') {
            Neurons::Layers(parts)
        } else {
            Neurons::Count(parts[0])
        })
    }
}

/// Contents of a `--config` file.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub architecture: ArchKind,
    pub mode: ModeArg,
    pub inputs: usize,
    pub outputs: usize,
    pub neurons: Neurons,
    #[serde(default)]
    pub bottlenecks: Option<Vec<usize>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
    }

    pub fn spec(&self) -> Result<NetworkSpec, CliError> {
        build_spec(
            self.architecture,
            self.inputs,
            self.outputs,
            &self.neurons,
            self.bottlenecks.as_deref(),
        )
    }
}

/// For the perceptron family a neuron list gives the hidden layers; the
/// output layer of size `outputs` is appended. For PT-RBF it gives the Gaussian
/// layers, and `bottlenecks` lists either all projection widths (the last one
/// equal to `outputs`) or all but the last.
pub fn build_spec(
    arch: ArchKind,
    inputs: usize,
    outputs: usize,
    neurons: &Neurons,
    bottlenecks: Option<&[usize]>,
) -> Result<NetworkSpec, CliError> {
    match neurons {
        Neurons::Count(n) => {
            if bottlenecks.is_some() {
                return Err(CliError::Invalid(
                    "--bottlenecks needs a list of layer sizes in --neurons".into(),
                ));
            }
            Ok(ShallowSpec::new(arch, inputs, outputs, *n)?.into())
        }
        Neurons::Layers(layers) => {
            if !arch.supports_deep() {
                return Err(CostError::NotApplicable(arch).into());
            }
            if arch == ArchKind::Ptrbf {
                let mut outs = bottlenecks.unwrap_or(&[]).to_vec();
                if outs.len() + 1 == layers.len() {
                    outs.push(outputs);
                } else if outs.len() != layers.len() || outs.last() != Some(&outputs) {
                    return Err(CliError::Invalid(format!(
                        "PT-RBF with {} layers needs {} or {} bottlenecks, the last equal to --outputs",
                        layers.len(),
                        layers.len().saturating_sub(1),
                        layers.len()
                    )));
                }
                Ok(DeepSpec::ptrbf(inputs, layers.clone(), outs)?.into())
            } else {
                if bottlenecks.is_some() {
                    return Err(CliError::Invalid(
                        "--bottlenecks only applies to ptrbf".into(),
                    ));
                }
                let mut all = layers.clone();
                all.push(outputs);
                Ok(DeepSpec::perceptron(arch, inputs, all)?.into())
            }
        }
    }
}
