//! Complex-valued neural networks whose arithmetic is metered in real
//! multiplications, together with closed-form cost models for six
//! architectures and a harness that checks one against the other.
//!
//! - [`numerics`]: complex scalars, the counting convention and the [`Meter`].
//! - [`cost_model`]: exact training and inference costs, asymptotic classes, sweeps.
//! - [`networks`]: executable CVFNN, SCFNN, MLMVN, C-RBF, FC-RBF and PT-RBF.
//! - [`harness`]: count verification, gradient checks, use-case tables, asymptotes.

pub mod cost_model;
pub mod harness;
pub mod networks;
pub mod numerics;

pub use cost_model::{
    asymptotic_class, cost, deep_cost, regime_spec, shallow_cost, sweep, ArchKind,
    AsymptoticRegime, ComplexityOrder, CostError, DeepSpec, Mode, NRange, NetworkSpec, ShallowSpec,
    SweepRow,
};
pub use networks::{Network, NetworkError, TrainConfig};
pub use numerics::{ComplexScalar, Meter, MultCounter, MultKind, NumericsError, Phase};
