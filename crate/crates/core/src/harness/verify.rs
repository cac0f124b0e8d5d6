use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cost_model::{cost, ArchKind, CostError, DeepSpec, Mode, NetworkSpec, ShallowSpec};
use crate::networks::{Network, TrainConfig};
use crate::numerics::{ComplexScalar, Meter};

use super::HarnessError;

pub const MAX_IO: usize = 16;
pub const MAX_NEURONS: usize = 64;
/// Largest number of layers `L` in generated deep specs.
pub const MAX_DEPTH: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecShape {
    Shallow,
    /// Deep specs for deep-capable architectures only.
    Deep,
    /// Deep-capable architectures draw shallow or deep with equal odds.
    Mixed,
}

/// Seeded source of random valid specs. Each draw yields one spec per
/// architecture in the generator's list.
#[derive(Clone, Debug)]
pub struct SpecGenerator {
    rng: ChaCha8Rng,
    shape: SpecShape,
    archs: Vec<ArchKind>,
}

impl SpecGenerator {
    pub fn new(seed: u64, shape: SpecShape) -> Self {
        let archs = match shape {
            SpecShape::Deep => ArchKind::DEEP.to_vec(),
            _ => ArchKind::ALL.to_vec(),
        };
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            shape,
            archs,
        }
    }

    pub fn with_archs(mut self, archs: &[ArchKind]) -> Self {
        self.archs = archs.to_vec();
        if self.shape == SpecShape::Deep {
            self.archs.retain(|a| a.supports_deep());
        }
        self
    }

    pub fn archs(&self) -> &[ArchKind] {
        &self.archs
    }

    pub fn next_specs(&mut self) -> Vec<NetworkSpec> {
        let archs = self.archs.clone();
        archs.into_iter().map(|a| self.draw(a)).collect()
    }

    /// Seed for the parameters and data of one trial.
    pub fn next_seed(&mut self) -> u64 {
        self.rng.gen()
    }

    fn draw(&mut self, arch: ArchKind) -> NetworkSpec {
        let deep = match self.shape {
            SpecShape::Shallow => false,
            SpecShape::Deep => true,
            SpecShape::Mixed => arch.supports_deep() && self.rng.gen_bool(0.5),
        };
        let p = self.rng.gen_range(1..=MAX_IO);
        let r = self.rng.gen_range(1..=MAX_IO);
        if !deep {
            let n = self.rng.gen_range(1..=MAX_NEURONS);
            return ShallowSpec::new(arch, p, r, n)
                .expect("positive sizes")
                .into();
        }
        if arch == ArchKind::Ptrbf {
            let depth = self.rng.gen_range(1..=MAX_DEPTH);
            let neurons = (0..depth)
                .map(|_| self.rng.gen_range(1..=MAX_NEURONS))
                .collect();
            let mut outs: Vec<usize> = (1..depth).map(|_| self.rng.gen_range(1..=MAX_IO)).collect();
            outs.push(r);
            DeepSpec::ptrbf(p, neurons, outs)
                .expect("valid PT-RBF spec")
                .into()
        } else {
            let depth = self.rng.gen_range(2..=MAX_DEPTH);
            let mut layers: Vec<usize> = (1..depth)
                .map(|_| self.rng.gen_range(1..=MAX_NEURONS))
                .collect();
            layers.push(r);
            DeepSpec::perceptron(arch, p, layers)
                .expect("valid perceptron spec")
                .into()
        }
    }
}

/// Formula count against metered count for one spec and mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub spec: NetworkSpec,
    pub mode: Mode,
    pub formula_count: u64,
    pub metered_count: u64,
    /// Metered multiplications under Forward, BackwardDelta and ParameterUpdate.
    pub per_phase: [u64; 3],
    pub matches: bool,
}

impl CountReport {
    fn new(spec: NetworkSpec, mode: Mode, formula_count: u64, per_phase: [u64; 3]) -> Self {
        let metered_count = per_phase.iter().sum();
        Self {
            spec,
            mode,
            formula_count,
            metered_count,
            per_phase,
            matches: formula_count == metered_count,
        }
    }
}

impl fmt::Display for CountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [fw, bw, up] = self.per_phase;
        write!(
            f,
            "{} {}: formula {}, metered {} (forward {fw}, backward {bw}, update {up}){}",
            self.spec,
            self.mode,
            self.formula_count,
            self.metered_count,
            if self.matches { "" } else { " MISMATCH" }
        )
    }
}

/// Builds a network for every generated spec, runs one inference and one
/// training step on random data, and compares the metered counts with the
/// closed forms. Returns `trials * archs * 2` reports.
pub fn verify_counts(
    generator: &mut SpecGenerator,
    trials: usize,
) -> Result<Vec<CountReport>, HarnessError> {
    verify_counts_with(generator, trials, cost)
}

/// [`verify_counts`] against an arbitrary formula.
pub fn verify_counts_with<F>(
    generator: &mut SpecGenerator,
    trials: usize,
    formula: F,
) -> Result<Vec<CountReport>, HarnessError>
where
    F: Fn(&NetworkSpec, Mode) -> Result<u64, CostError>,
{
    if trials == 0 {
        return Err(HarnessError::InvalidArgument(
            "trials must be at least 1".into(),
        ));
    }
    let cfg = TrainConfig::default();
    let mut reports = Vec::with_capacity(
        trials
            .saturating_mul(generator.archs().len())
            .saturating_mul(2),
    );
    for _ in 0..trials {
        for spec in generator.next_specs() {
            let seed = generator.next_seed();
            let mut net = Network::build(spec.clone(), seed)?;
            let mut data = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let x = random_vector(&mut data, spec.inputs());
            let d = random_vector(&mut data, spec.outputs());

            let mut meter = Meter::new();
            net.infer(&x, &mut meter)?;
            let per_phase = meter.snapshot()?.phase_totals();
            reports.push(CountReport::new(
                spec.clone(),
                Mode::Inference,
                formula(&spec, Mode::Inference)?,
                per_phase,
            ));

            let mut meter = Meter::new();
            net.train_step(&x, &d, &cfg, &mut meter)?;
            let per_phase = meter.snapshot()?.phase_totals();
            reports.push(CountReport::new(
                spec.clone(),
                Mode::Training,
                formula(&spec, Mode::Training)?,
                per_phase,
            ));
        }
    }
    Ok(reports)
}

/// Components uniform on `[-1, 1]^2`.
pub(crate) fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<ComplexScalar> {
    (0..len)
        .map(|_| ComplexScalar::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect()
}
