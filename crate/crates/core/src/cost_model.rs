//! Closed-form real-multiplication counts for the six CVNN architectures.
//!
//! All evaluation is done in exact integer arithmetic. Counts are per online
//! training step (forward, backward and update for one sample) or per forward
//! pass.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CostError {
    #[error("invalid network spec: {0}")]
    InvalidSpec(String),
    #[error(
        "{0} is not applicable to deep networks: it is only proposed for shallow architectures"
    )]
    NotApplicable(ArchKind),
    #[error("cost does not fit in 64 bits")]
    Overflow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArchKind {
    Cvfnn,
    Scfnn,
    Mlmvn,
    Crbf,
    Fcrbf,
    Ptrbf,
}

impl ArchKind {
    pub const ALL: [ArchKind; 6] = [
        ArchKind::Cvfnn,
        ArchKind::Scfnn,
        ArchKind::Mlmvn,
        ArchKind::Crbf,
        ArchKind::Fcrbf,
        ArchKind::Ptrbf,
    ];

    /// Architectures that have a deep variant.
    pub const DEEP: [ArchKind; 4] = [
        ArchKind::Cvfnn,
        ArchKind::Scfnn,
        ArchKind::Mlmvn,
        ArchKind::Ptrbf,
    ];

    pub fn supports_deep(self) -> bool {
        !matches!(self, ArchKind::Crbf | ArchKind::Fcrbf)
    }

    /// Multilayer perceptron family (CVFNN, SCFNN, MLMVN).
    pub fn is_perceptron(self) -> bool {
        matches!(self, ArchKind::Cvfnn | ArchKind::Scfnn | ArchKind::Mlmvn)
    }

    /// Lowercase identifier used in files and on the command line.
    pub fn slug(self) -> &'static str {
        match self {
            ArchKind::Cvfnn => "cvfnn",
            ArchKind::Scfnn => "scfnn",
            ArchKind::Mlmvn => "mlmvn",
            ArchKind::Crbf => "crbf",
            ArchKind::Fcrbf => "fcrbf",
            ArchKind::Ptrbf => "ptrbf",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            ArchKind::Cvfnn => "CVFNN",
            ArchKind::Scfnn => "SCFNN",
            ArchKind::Mlmvn => "MLMVN",
            ArchKind::Crbf => "C-RBF",
            ArchKind::Fcrbf => "FC-RBF",
            ArchKind::Ptrbf => "PT-RBF",
        }
    }
}

impl fmt::Display for ArchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl FromStr for ArchKind {
    type Err = CostError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .collect::<String>()
            .to_lowercase();
        ArchKind::ALL
            .into_iter()
            .find(|a| a.slug() == key)
            .ok_or_else(|| CostError::InvalidSpec(format!("unknown architecture '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Training,
    Inference,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Training, Mode::Inference];

    pub fn slug(self) -> &'static str {
        match self {
            Mode::Training => "training",
            Mode::Inference => "inference",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Mode {
    type Err = CostError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "training" | "train" => Ok(Mode::Training),
            "inference" | "infer" => Ok(Mode::Inference),
            _ => Err(CostError::InvalidSpec(format!("unknown mode '{s}'"))),
        }
    }
}

/// Single-hidden-layer network: `inputs` complex inputs, `neurons` hidden
/// complex neurons, `outputs` complex outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShallowSpec {
    pub arch: ArchKind,
    pub inputs: usize,
    pub outputs: usize,
    pub neurons: usize,
}

impl ShallowSpec {
    pub fn new(
        arch: ArchKind,
        inputs: usize,
        outputs: usize,
        neurons: usize,
    ) -> Result<Self, CostError> {
        if inputs == 0 || outputs == 0 || neurons == 0 {
            return Err(CostError::InvalidSpec(format!(
                "inputs, outputs and neurons must be positive (got P={inputs}, R={outputs}, N={neurons})"
            )));
        }
        Ok(Self {
            arch,
            inputs,
            outputs,
            neurons,
        })
    }
}

/// Multi-layer network.
///
/// For the perceptron family `neurons` lists `I^1..I^L`, the last entry being
/// the output layer (`I^L = R`), and `L >= 2`. For PT-RBF `neurons` lists the
/// Gaussian layer sizes `I^1..I^L` and `bottlenecks` the projection widths
/// `O^1..O^L` with `O^L = R`; `O^0` is `inputs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeepSpec {
    pub arch: ArchKind,
    pub inputs: usize,
    pub neurons: Vec<usize>,
    pub bottlenecks: Option<Vec<usize>>,
}

impl DeepSpec {
    /// Perceptron-family spec; `layers` are `I^1..I^L`, output layer last.
    pub fn perceptron(
        arch: ArchKind,
        inputs: usize,
        layers: Vec<usize>,
    ) -> Result<Self, CostError> {
        let spec = Self {
            arch,
            inputs,
            neurons: layers,
            bottlenecks: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn ptrbf(
        inputs: usize,
        neurons: Vec<usize>,
        bottlenecks: Vec<usize>,
    ) -> Result<Self, CostError> {
        let spec = Self {
            arch: ArchKind::Ptrbf,
            inputs,
            neurons,
            bottlenecks: Some(bottlenecks),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), CostError> {
        if !self.arch.supports_deep() {
            return Err(CostError::NotApplicable(self.arch));
        }
        if self.inputs == 0 || self.neurons.contains(&0) {
            return Err(CostError::InvalidSpec(
                "all layer sizes must be positive".into(),
            ));
        }
        match (self.arch, &self.bottlenecks) {
            (ArchKind::Ptrbf, Some(b)) => {
                if self.neurons.is_empty() {
                    return Err(CostError::InvalidSpec(
                        "PT-RBF needs at least one layer".into(),
                    ));
                }
                if b.len() != self.neurons.len() {
                    return Err(CostError::InvalidSpec(format!(
                        "PT-RBF needs one bottleneck per layer ({} layers, {} bottlenecks)",
                        self.neurons.len(),
                        b.len()
                    )));
                }
                if b.contains(&0) {
                    return Err(CostError::InvalidSpec(
                        "bottleneck sizes must be positive".into(),
                    ));
                }
            }
            (ArchKind::Ptrbf, None) => {
                return Err(CostError::InvalidSpec(
                    "PT-RBF deep spec needs bottlenecks".into(),
                ))
            }
            (_, Some(_)) => {
                return Err(CostError::InvalidSpec(
                    "bottlenecks only apply to PT-RBF".into(),
                ))
            }
            (_, None) => {
                if self.neurons.len() < 2 {
                    return Err(CostError::InvalidSpec(
                        "perceptron deep spec needs a hidden layer and an output layer".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Number of layers `L`.
    pub fn depth(&self) -> usize {
        self.neurons.len()
    }

    pub fn outputs(&self) -> usize {
        match &self.bottlenecks {
            Some(b) => *b.last().expect("validated"),
            None => *self.neurons.last().expect("validated"),
        }
    }

    /// `I^0..I^L` for the perceptron family.
    pub fn layer_sizes(&self) -> Vec<usize> {
        std::iter::once(self.inputs)
            .chain(self.neurons.iter().copied())
            .collect()
    }

    /// `O^0..O^L` for PT-RBF.
    pub fn bottleneck_sizes(&self) -> Option<Vec<usize>> {
        self.bottlenecks.as_ref().map(|b| {
            std::iter::once(self.inputs)
                .chain(b.iter().copied())
                .collect()
        })
    }

    /// The deep spec equivalent to a shallow one (`L = 2`, or `L = 1` for PT-RBF).
    pub fn from_shallow(s: &ShallowSpec) -> Result<Self, CostError> {
        match s.arch {
            ArchKind::Ptrbf => Self::ptrbf(s.inputs, vec![s.neurons], vec![s.outputs]),
            a if a.is_perceptron() => Self::perceptron(a, s.inputs, vec![s.neurons, s.outputs]),
            a => Err(CostError::NotApplicable(a)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NetworkSpec {
    Shallow(ShallowSpec),
    Deep(DeepSpec),
}

impl NetworkSpec {
    pub fn arch(&self) -> ArchKind {
        match self {
            NetworkSpec::Shallow(s) => s.arch,
            NetworkSpec::Deep(d) => d.arch,
        }
    }

    pub fn inputs(&self) -> usize {
        match self {
            NetworkSpec::Shallow(s) => s.inputs,
            NetworkSpec::Deep(d) => d.inputs,
        }
    }

    pub fn outputs(&self) -> usize {
        match self {
            NetworkSpec::Shallow(s) => s.outputs,
            NetworkSpec::Deep(d) => d.outputs(),
        }
    }

    pub fn validate(&self) -> Result<(), CostError> {
        match self {
            NetworkSpec::Shallow(s) => {
                ShallowSpec::new(s.arch, s.inputs, s.outputs, s.neurons).map(|_| ())
            }
            NetworkSpec::Deep(d) => d.validate(),
        }
    }
}

impl From<ShallowSpec> for NetworkSpec {
    fn from(s: ShallowSpec) -> Self {
        NetworkSpec::Shallow(s)
    }
}

impl From<DeepSpec> for NetworkSpec {
    fn from(d: DeepSpec) -> Self {
        NetworkSpec::Deep(d)
    }
}

impl fmt::Display for NetworkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkSpec::Shallow(s) => {
                write!(
                    f,
                    "{} shallow P={} R={} N={}",
                    s.arch, s.inputs, s.outputs, s.neurons
                )
            }
            NetworkSpec::Deep(d) => {
                write!(f, "{} deep P={} I={:?}", d.arch, d.inputs, d.neurons)?;
                if let Some(b) = &d.bottlenecks {
                    write!(f, " O={b:?}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parameter couplings under which asymptotic growth is classified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AsymptoticRegime {
    /// Shallow, `P = R << N`.
    ShallowNDominant,
    /// Shallow, `P = R ~ N`.
    ShallowBalanced,
    /// Deep, `P = R = N >> L`.
    DeepNDominant,
    /// Deep, `P = R = N ~ L`.
    DeepBalanced,
}

impl AsymptoticRegime {
    pub const ALL: [AsymptoticRegime; 4] = [
        AsymptoticRegime::ShallowNDominant,
        AsymptoticRegime::ShallowBalanced,
        AsymptoticRegime::DeepNDominant,
        AsymptoticRegime::DeepBalanced,
    ];

    pub fn is_deep(self) -> bool {
        matches!(
            self,
            AsymptoticRegime::DeepNDominant | AsymptoticRegime::DeepBalanced
        )
    }

    pub fn slug(self) -> &'static str {
        match self {
            AsymptoticRegime::ShallowNDominant => "shallow-n-dominant",
            AsymptoticRegime::ShallowBalanced => "shallow-balanced",
            AsymptoticRegime::DeepNDominant => "deep-n-dominant",
            AsymptoticRegime::DeepBalanced => "deep-balanced",
        }
    }

    pub fn coupling(self) -> &'static str {
        match self {
            AsymptoticRegime::ShallowNDominant => "P=R<<N",
            AsymptoticRegime::ShallowBalanced => "P=R~N",
            AsymptoticRegime::DeepNDominant => "P=R=N>>L",
            AsymptoticRegime::DeepBalanced => "P=R=N~L",
        }
    }
}

impl FromStr for AsymptoticRegime {
    type Err = CostError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        AsymptoticRegime::ALL
            .into_iter()
            .find(|r| r.slug() == key)
            .ok_or_else(|| CostError::InvalidSpec(format!("unknown regime '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComplexityOrder {
    Linear = 1,
    Quadratic = 2,
    Cubic = 3,
}

impl ComplexityOrder {
    pub fn exponent(self) -> u32 {
        self as u32
    }

    pub fn from_exponent(e: i64) -> Option<Self> {
        match e {
            1 => Some(ComplexityOrder::Linear),
            2 => Some(ComplexityOrder::Quadratic),
            3 => Some(ComplexityOrder::Cubic),
            _ => None,
        }
    }
}

impl fmt::Display for ComplexityOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexityOrder::Linear => f.write_str("O(N)"),
            ComplexityOrder::Quadratic => f.write_str("O(N^2)"),
            ComplexityOrder::Cubic => f.write_str("O(N^3)"),
        }
    }
}

/// Checked u128 accumulator for the formulas below.
#[derive(Clone, Copy)]
struct Exact(u128);

impl Exact {
    fn of(n: usize) -> Self {
        Exact(n as u128)
    }

    fn mul(self, rhs: impl Into<Exact>) -> Result<Self, CostError> {
        self.0
            .checked_mul(rhs.into().0)
            .map(Exact)
            .ok_or(CostError::Overflow)
    }

    fn add(self, rhs: impl Into<Exact>) -> Result<Self, CostError> {
        self.0
            .checked_add(rhs.into().0)
            .map(Exact)
            .ok_or(CostError::Overflow)
    }

    fn finish(self) -> Result<u64, CostError> {
        u64::try_from(self.0).map_err(|_| CostError::Overflow)
    }
}

impl From<u64> for Exact {
    fn from(n: u64) -> Self {
        Exact(n as u128)
    }
}

impl From<usize> for Exact {
    fn from(n: usize) -> Self {
        Exact(n as u128)
    }
}

/// Linear form `a*P + b*R + c` in exact arithmetic.
fn lin(a: u64, p: usize, b: u64, r: usize, c: u64) -> Result<Exact, CostError> {
    Exact::of(p).mul(a)?.add(Exact::of(r).mul(b)?)?.add(c)
}

/// Shallow cost table.
pub fn shallow_cost(spec: &ShallowSpec, mode: Mode) -> Result<u64, CostError> {
    let ShallowSpec {
        arch,
        inputs: p,
        outputs: r,
        neurons: n,
    } = *spec;
    let n = Exact::of(n);
    let total = match (arch, mode) {
        (ArchKind::Cvfnn, Mode::Training) => {
            n.mul(lin(8, p, 12, r, 8)?)?.add(Exact::of(r).mul(8u64)?)?
        }
        (ArchKind::Scfnn, Mode::Training) => {
            n.mul(lin(8, p, 12, r, 8)?)?.add(Exact::of(r).mul(6u64)?)?
        }
        (ArchKind::Cvfnn | ArchKind::Scfnn | ArchKind::Fcrbf, Mode::Inference) => {
            n.mul(lin(4, p, 4, r, 0)?)?
        }
        (ArchKind::Mlmvn, Mode::Training) => n
            .mul(lin(8, p, 12, r, 16)?)?
            .add(Exact::of(r).mul(12u64)?)?,
        (ArchKind::Mlmvn, Mode::Inference) => {
            n.mul(lin(4, p, 4, r, 4)?)?.add(Exact::of(r).mul(4u64)?)?
        }
        (ArchKind::Crbf, Mode::Training) => {
            n.mul(lin(4, p, 6, r, 5)?)?.add(Exact::of(r).mul(4u64)?)?
        }
        (ArchKind::Crbf, Mode::Inference) => n.mul(lin(2, p, 2, r, 1)?)?,
        (ArchKind::Fcrbf, Mode::Training) => n
            .mul(lin(12, p, 12, r, 12)?)?
            .add(Exact::of(r).mul(4u64)?)?,
        (ArchKind::Ptrbf, Mode::Training) => {
            n.mul(lin(4, p, 12, r, 12)?)?.add(Exact::of(r).mul(4u64)?)?
        }
        (ArchKind::Ptrbf, Mode::Inference) => n.mul(lin(2, p, 4, r, 2)?)?,
    };
    total.finish()
}

/// Deep cost table. C-RBF and FC-RBF have no deep form.
pub fn deep_cost(spec: &DeepSpec, mode: Mode) -> Result<u64, CostError> {
    spec.validate()?;
    match spec.arch {
        ArchKind::Ptrbf => deep_ptrbf_cost(spec, mode),
        _ => deep_perceptron_cost(spec, mode),
    }
}

fn deep_perceptron_cost(spec: &DeepSpec, mode: Mode) -> Result<u64, CostError> {
    let i = spec.layer_sizes();
    let l_out = i.len() - 1;
    let mut total = Exact(0);
    match mode {
        Mode::Inference => {
            // 4 * sum_{l=1}^{L} I^l (I^{l-1} + k), k = 1 for MLMVN, 0 otherwise
            let k = usize::from(spec.arch == ArchKind::Mlmvn);
            for l in 1..=l_out {
                total = total.add(
                    Exact::of(i[l])
                        .mul(Exact::of(i[l - 1]).add(k)?)?
                        .mul(4u64)?,
                )?;
            }
        }
        Mode::Training => {
            // hidden: 4 * sum_{l=1}^{L-1} I^l (2 I^{l-1} + I^{l+1} + k)
            let k: u64 = if spec.arch == ArchKind::Mlmvn { 4 } else { 2 };
            for l in 1..l_out {
                let inner = Exact::of(i[l - 1]).mul(2u64)?.add(i[l + 1])?.add(k)?;
                total = total.add(Exact::of(i[l]).mul(inner)?.mul(4u64)?)?;
            }
            let (out, prev) = (Exact::of(i[l_out]), i[l_out - 1]);
            let tail = match spec.arch {
                // 8 I^L (I^{L-1} + 1)
                ArchKind::Cvfnn => out.mul(Exact::of(prev).add(1u64)?)?.mul(8u64)?,
                // 2 I^L (4 I^{L-1} + 3)
                ArchKind::Scfnn => out.mul(Exact::of(prev).mul(4u64)?.add(3u64)?)?.mul(2u64)?,
                // 4 I^L (2 I^{L-1} + 3)
                ArchKind::Mlmvn => out.mul(Exact::of(prev).mul(2u64)?.add(3u64)?)?.mul(4u64)?,
                a => return Err(CostError::NotApplicable(a)),
            };
            total = total.add(tail)?;
        }
    }
    total.finish()
}

fn deep_ptrbf_cost(spec: &DeepSpec, mode: Mode) -> Result<u64, CostError> {
    let o = spec.bottleneck_sizes().expect("validated PT-RBF spec");
    let i: Vec<usize> = std::iter::once(0)
        .chain(spec.neurons.iter().copied())
        .collect();
    let depth = spec.depth();
    let mut total = Exact(0);
    match mode {
        Mode::Inference => {
            // 2 * sum_{l=1}^{L} I^l (O^{l-1} + 2 O^l + 1)
            for l in 1..=depth {
                let inner = Exact::of(o[l - 1])
                    .add(Exact::of(o[l]).mul(2u64)?)?
                    .add(1u64)?;
                total = total.add(Exact::of(i[l]).mul(inner)?.mul(2u64)?)?;
            }
        }
        Mode::Training => {
            // 4 sum_{l=1}^{L} I^l (O^{l-1} + 3 O^l + 3)
            for l in 1..=depth {
                let inner = Exact::of(o[l - 1])
                    .add(Exact::of(o[l]).mul(3u64)?)?
                    .add(3u64)?;
                total = total.add(Exact::of(i[l]).mul(inner)?.mul(4u64)?)?;
            }
            // + 4 sum_{l=1}^{L-1} O^l (I^{l+1} + 1)
            for l in 1..depth {
                total = total.add(
                    Exact::of(o[l])
                        .mul(Exact::of(i[l + 1]).add(1u64)?)?
                        .mul(4u64)?,
                )?;
            }
            // + 4 O^L
            total = total.add(Exact::of(o[depth]).mul(4u64)?)?;
        }
    }
    total.finish()
}

pub fn cost(spec: &NetworkSpec, mode: Mode) -> Result<u64, CostError> {
    match spec {
        NetworkSpec::Shallow(s) => shallow_cost(s, mode),
        NetworkSpec::Deep(d) => deep_cost(d, mode),
    }
}

/// Asymptotic order for a populated (architecture, regime) cell. Identical for
/// training and inference.
pub fn asymptotic_class(
    arch: ArchKind,
    regime: AsymptoticRegime,
) -> Result<ComplexityOrder, CostError> {
    if regime.is_deep() && !arch.supports_deep() {
        return Err(CostError::NotApplicable(arch));
    }
    Ok(match regime {
        AsymptoticRegime::ShallowNDominant => ComplexityOrder::Linear,
        AsymptoticRegime::ShallowBalanced | AsymptoticRegime::DeepNDominant => {
            ComplexityOrder::Quadratic
        }
        AsymptoticRegime::DeepBalanced => ComplexityOrder::Cubic,
    })
}

/// Fixed depth used for the `P=R=N>>L` coupling.
pub const N_DOMINANT_DEPTH: usize = 4;
/// Fixed `P = R` used for the shallow `P=R<<N` coupling.
pub const N_DOMINANT_IO: usize = 4;

/// The network evaluated at neuron count `n` under a regime's coupling.
///
/// Shallow N-dominant fixes `P = R = 4`; balanced couplings set `P = R = N`;
/// deep N-dominant fixes `L = 4` while deep balanced sets `L = N`. Deep PT-RBF
/// uses `I^l = O^l = N` throughout.
pub fn regime_spec(
    arch: ArchKind,
    regime: AsymptoticRegime,
    n: usize,
) -> Result<NetworkSpec, CostError> {
    if regime.is_deep() && !arch.supports_deep() {
        return Err(CostError::NotApplicable(arch));
    }
    let spec = match regime {
        AsymptoticRegime::ShallowNDominant => {
            ShallowSpec::new(arch, N_DOMINANT_IO, N_DOMINANT_IO, n)?.into()
        }
        AsymptoticRegime::ShallowBalanced => ShallowSpec::new(arch, n, n, n)?.into(),
        AsymptoticRegime::DeepNDominant | AsymptoticRegime::DeepBalanced => {
            let depth = if regime == AsymptoticRegime::DeepBalanced {
                n
            } else {
                N_DOMINANT_DEPTH
            };
            if arch == ArchKind::Ptrbf {
                DeepSpec::ptrbf(n, vec![n; depth], vec![n; depth])?.into()
            } else {
                DeepSpec::perceptron(arch, n, vec![n; depth.max(2)])?.into()
            }
        }
    };
    Ok(spec)
}

/// Inclusive arithmetic progression `start, start+step, ..., <= stop`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub start: usize,
    pub stop: usize,
    pub step: usize,
}

impl NRange {
    pub fn new(start: usize, stop: usize, step: usize) -> Result<Self, CostError> {
        if step == 0 {
            return Err(CostError::InvalidSpec("range step must be positive".into()));
        }
        if start == 0 {
            return Err(CostError::InvalidSpec("neuron counts start at 1".into()));
        }
        Ok(Self { start, stop, step })
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let stop = self.stop;
        (self.start..=stop.max(self.start))
            .step_by(self.step)
            .filter(move |&n| n <= stop)
    }
}

impl FromStr for NRange {
    type Err = CostError;

    /// `start:stop:step` or `start:stop` (step 1).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CostError::InvalidSpec(format!("range '{s}' is not start:stop[:step]"));
        let parts: Vec<usize> = s
            .split(':')
            .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        match parts.as_slice() {
            [a, b] => NRange::new(*a, *b, 1),
            [a, b, c] => NRange::new(*a, *b, *c),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub arch: ArchKind,
    pub mode: Mode,
    pub inputs: usize,
    pub outputs: usize,
    pub neurons: usize,
    pub multiplications: u64,
}

/// Tabulates shallow costs over a range of neuron counts. Rows are ordered by
/// architecture, then `N`, then mode.
pub fn sweep(
    archs: &[ArchKind],
    modes: &[Mode],
    inputs: usize,
    outputs: usize,
    range: NRange,
) -> Result<Vec<SweepRow>, CostError> {
    let mut archs = archs.to_vec();
    archs.sort();
    archs.dedup();
    let mut modes = modes.to_vec();
    modes.sort();
    modes.dedup();
    let mut rows = Vec::new();
    for arch in archs {
        for n in range.iter() {
            let spec = ShallowSpec::new(arch, inputs, outputs, n)?;
            for &mode in &modes {
                rows.push(SweepRow {
                    arch,
                    mode,
                    inputs,
                    outputs,
                    neurons: n,
                    multiplications: shallow_cost(&spec, mode)?,
                });
            }
        }
    }
    Ok(rows)
}
