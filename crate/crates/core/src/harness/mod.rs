//! Checks that bind the executable networks to the closed forms.

mod asymptote;
mod gradient;
mod use_cases;
mod verify;
mod xor;

use thiserror::Error;

use crate::cost_model::CostError;
use crate::networks::NetworkError;
use crate::numerics::NumericsError;

pub use asymptote::{empirical_asymptote, fit_slope, geometric_series, AsymptoteFit};
pub use gradient::{
    analytic_gradient, gradient_check, numeric_gradient, relative_error, GRADIENT_FLOOR,
};
pub use use_cases::{
    reproduce_use_cases, Application, CellStatus, EntryStatus, UseCaseCell, UseCaseConfig,
    UseCaseReport, UseCaseSpec, UseCaseTable,
};
pub use verify::{
    verify_counts, verify_counts_with, CountReport, SpecGenerator, SpecShape, MAX_DEPTH, MAX_IO,
    MAX_NEURONS,
};
pub use xor::{xor_accuracy, xor_demo, xor_patterns, XorOutcome, XOR_MAX_STEPS};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite {0}")]
    NonFinite(String),
    #[error("use-case table: {0}")]
    Table(String),
}
