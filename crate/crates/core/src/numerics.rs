//! Metered double-precision complex arithmetic.
//!
//! Every real-valued multiplication executed by the network code goes through a
//! [`Meter`], which files it under the active [`Phase`] and a [`MultKind`].
//! Additions, subtractions, comparisons, square roots, power-of-two scalings and
//! transcendental evaluations are free: they are assumed to be adders, exponent
//! shifts or lookup tables.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("division by zero ({numerator} / 0)")]
    DivisionByZero { numerator: f64 },
    #[error("multiplication counter overflowed 64 bits")]
    CounterOverflow,
    #[error("counter diff is negative in cell ({phase:?}, {kind:?})")]
    NegativeDiff { phase: Phase, kind: MultKind },
}

/// A double-precision complex number.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComplexScalar {
    pub re: f64,
    pub im: f64,
}

impl ComplexScalar {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0 };
    pub const ONE: Self = Self { re: 1.0, im: 0.0 };
    pub const I: Self = Self { re: 0.0, im: 1.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub const fn from_real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Argument in (-pi, pi]. Lookup-table function, unmetered.
    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }

    /// Fully complex hyperbolic tangent (lookup, unmetered).
    pub fn tanh(self) -> Self {
        Complex64::from(self).tanh().into()
    }

    /// Complex hyperbolic secant (lookup, unmetered).
    pub fn sech(self) -> Self {
        Complex64::from(self).cosh().inv().into()
    }

    /// Complex hyperbolic sine (lookup, unmetered).
    pub fn sinh(self) -> Self {
        Complex64::from(self).sinh().into()
    }

    /// Scales both components by `2^exp`. Exact exponent shift, unmetered.
    pub fn pow2_scale(self, exp: i32) -> Self {
        Self::new(pow2_scale(self.re, exp), pow2_scale(self.im, exp))
    }
}

impl From<Complex64> for ComplexScalar {
    fn from(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

impl From<ComplexScalar> for Complex64 {
    fn from(z: ComplexScalar) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl fmt::Display for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for ComplexScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for ComplexScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for ComplexScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl AddAssign for ComplexScalar {
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign for ComplexScalar {
    fn sub_assign(&mut self, rhs: Self) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl std::iter::Sum for ComplexScalar {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, z| acc + z)
    }
}

/// `x * 2^exp`, exact for normal values. Unmetered.
pub fn pow2_scale(x: f64, exp: i32) -> f64 {
    x * 2f64.powi(exp)
}

/// Kind of metered multiplication event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MultKind {
    ComplexTimesComplex,
    ComplexTimesReal,
    RealTimesReal,
    SquaredMagnitude,
    RealDivision,
}

impl MultKind {
    pub const ALL: [MultKind; 5] = [
        MultKind::ComplexTimesComplex,
        MultKind::ComplexTimesReal,
        MultKind::RealTimesReal,
        MultKind::SquaredMagnitude,
        MultKind::RealDivision,
    ];

    /// Real multiplications charged per event.
    pub const fn cost(self) -> u64 {
        match self {
            MultKind::ComplexTimesComplex => 4,
            MultKind::ComplexTimesReal => 2,
            MultKind::RealTimesReal => 1,
            MultKind::SquaredMagnitude => 2,
            MultKind::RealDivision => 1,
        }
    }

    const fn index(self) -> usize {
        self as usize
    }
}

/// Computation phase a metered operation is attributed to.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub enum Phase {
    #[default]
    Forward,
    BackwardDelta,
    ParameterUpdate,
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::Forward, Phase::BackwardDelta, Phase::ParameterUpdate];

    const fn index(self) -> usize {
        self as usize
    }
}

/// One recorded multiplication event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultEvent {
    pub phase: Phase,
    pub kind: MultKind,
}

impl MultEvent {
    pub const fn cost(&self) -> u64 {
        self.kind.cost()
    }
}

/// Occurrence counts per (phase, kind) cell.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultCounter {
    cells: [[u64; 5]; 3],
}

impl MultCounter {
    pub fn occurrences(&self, phase: Phase, kind: MultKind) -> u64 {
        self.cells[phase.index()][kind.index()]
    }

    /// Real multiplications charged to one cell.
    pub fn multiplications(&self, phase: Phase, kind: MultKind) -> u64 {
        self.occurrences(phase, kind) * kind.cost()
    }

    pub fn phase_total(&self, phase: Phase) -> u64 {
        MultKind::ALL
            .iter()
            .map(|&k| self.multiplications(phase, k))
            .sum()
    }

    pub fn kind_total(&self, kind: MultKind) -> u64 {
        Phase::ALL
            .iter()
            .map(|&p| self.multiplications(p, kind))
            .sum()
    }

    pub fn grand_total(&self) -> u64 {
        Phase::ALL.iter().map(|&p| self.phase_total(p)).sum()
    }

    /// Per-phase totals in [`Phase::ALL`] order.
    pub fn phase_totals(&self) -> [u64; 3] {
        Phase::ALL.map(|p| self.phase_total(p))
    }

    /// Componentwise `after - before`.
    pub fn diff(before: &MultCounter, after: &MultCounter) -> Result<MultCounter, NumericsError> {
        let mut out = MultCounter::default();
        for phase in Phase::ALL {
            for kind in MultKind::ALL {
                let (b, a) = (
                    before.occurrences(phase, kind),
                    after.occurrences(phase, kind),
                );
                out.cells[phase.index()][kind.index()] = a
                    .checked_sub(b)
                    .ok_or(NumericsError::NegativeDiff { phase, kind })?;
            }
        }
        Ok(out)
    }
}

/// Single-owner multiplication meter. All metered kernels are methods on it.
#[derive(Clone, Debug, Default)]
pub struct Meter {
    counter: MultCounter,
    total: u64,
    phase: Phase,
    log: Option<Vec<MultEvent>>,
    overflowed: bool,
}

impl Meter {
    pub fn new() -> Self {
        Self::default()
    }

    /// A meter that also keeps every event, for replay audits.
    pub fn with_event_log() -> Self {
        Self {
            log: Some(Vec::new()),
            ..Self::default()
        }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn set_phase(&mut self, phase: Phase) {
        self.phase = phase;
    }

    pub fn events(&self) -> Option<&[MultEvent]> {
        self.log.as_deref()
    }

    pub fn snapshot(&self) -> Result<MultCounter, NumericsError> {
        if self.overflowed {
            return Err(NumericsError::CounterOverflow);
        }
        Ok(self.counter)
    }

    /// Real multiplications recorded since the last reset.
    pub fn total(&self) -> Result<u64, NumericsError> {
        if self.overflowed {
            return Err(NumericsError::CounterOverflow);
        }
        Ok(self.total)
    }

    pub fn reset(&mut self) {
        self.counter = MultCounter::default();
        self.total = 0;
        self.overflowed = false;
        if let Some(log) = self.log.as_mut() {
            log.clear();
        }
    }

    fn record(&mut self, kind: MultKind) {
        let cell = &mut self.counter.cells[self.phase.index()][kind.index()];
        match (cell.checked_add(1), self.total.checked_add(kind.cost())) {
            (Some(c), Some(t)) => {
                *cell = c;
                self.total = t;
            }
            _ => self.overflowed = true,
        }
        if let Some(log) = self.log.as_mut() {
            log.push(MultEvent {
                phase: self.phase,
                kind,
            });
        }
    }

    /// Complex product, schoolbook form: 4 real multiplications.
    pub fn cmul(&mut self, a: ComplexScalar, b: ComplexScalar) -> ComplexScalar {
        self.record(MultKind::ComplexTimesComplex);
        ComplexScalar::new(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re)
    }

    /// Complex times real: 2 real multiplications.
    pub fn cscale(&mut self, a: ComplexScalar, r: f64) -> ComplexScalar {
        self.record(MultKind::ComplexTimesReal);
        ComplexScalar::new(a.re * r, a.im * r)
    }

    /// Real times real: 1 real multiplication.
    pub fn rmul(&mut self, a: f64, b: f64) -> f64 {
        self.record(MultKind::RealTimesReal);
        a * b
    }

    /// `re^2 + im^2`: 2 real multiplications.
    pub fn sqmag(&mut self, a: ComplexScalar) -> f64 {
        self.record(MultKind::SquaredMagnitude);
        a.re * a.re + a.im * a.im
    }

    /// Real division, charged as one multiplication by a reciprocal.
    pub fn div_real(&mut self, a: f64, b: f64) -> Result<f64, NumericsError> {
        if b == 0.0 {
            return Err(NumericsError::DivisionByZero { numerator: a });
        }
        self.record(MultKind::RealDivision);
        Ok(a / b)
    }

    /// Complex divided by real: two real divisions.
    pub fn cdiv_real(&mut self, a: ComplexScalar, b: f64) -> Result<ComplexScalar, NumericsError> {
        Ok(ComplexScalar::new(
            self.div_real(a.re, b)?,
            self.div_real(a.im, b)?,
        ))
    }

    /// `z / max(|z|, floor)`: one squared magnitude and two divisions (4 in total).
    /// Returns the projection and the guarded magnitude.
    pub fn unit_project(
        &mut self,
        z: ComplexScalar,
        floor: f64,
    ) -> Result<(ComplexScalar, f64), NumericsError> {
        let mag = self.sqmag(z).sqrt().max(floor);
        Ok((self.cdiv_real(z, mag)?, mag))
    }
}

/// Learning-rate scaling folded into the adjacent counted product; unmetered.
pub fn fused_rate(z: ComplexScalar, rate: f64) -> ComplexScalar {
    ComplexScalar::new(z.re * rate, z.im * rate)
}

/// Real learning-rate scaling, folded like [`fused_rate`].
pub fn fused_rate_real(x: f64, rate: f64) -> f64 {
    x * rate
}

/// `rate / share` for an integer share count. Depends only on the layout, so it
/// is a per-layer constant folded into the rate; unmetered.
pub fn rate_per_share(rate: f64, share: usize) -> f64 {
    rate / share.max(1) as f64
}

/// `1/2 * sum |e|^2`. Diagnostic value reported by training; unmetered because
/// no parameter update consumes it.
pub fn half_sq_norm(e: &[ComplexScalar]) -> f64 {
    0.5 * e.iter().map(|z| z.re * z.re + z.im * z.im).sum::<f64>()
}

/// `1/2 * sum x^2` for real diagnostics (angular errors). Unmetered.
pub fn half_sum_sq(xs: &[f64]) -> f64 {
    0.5 * xs.iter().map(|x| x * x).sum::<f64>()
}

/// Unmetered reference product, for tests and oracles only.
pub fn reference_mul(a: ComplexScalar, b: ComplexScalar) -> ComplexScalar {
    ComplexScalar::new(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    #[test]
    fn cmul_counts_four() {
        let mut m = Meter::new();
        assert_eq!(m.cmul(c(1.0, 2.0), c(3.0, 4.0)), c(-5.0, 10.0));
        assert_eq!(m.total().unwrap(), 4);
        let z = c(0.3, -1.7);
        assert_eq!(m.cmul(z, ComplexScalar::ONE), z);
        assert_eq!(m.total().unwrap(), 8);
    }

    #[test]
    fn cscale_counts_two_even_for_zero() {
        let mut m = Meter::new();
        assert_eq!(m.cscale(c(3.0, 4.0), 0.5), c(1.5, 2.0));
        assert_eq!(m.cscale(c(1.0, 1.0), 0.0), ComplexScalar::ZERO);
        assert_eq!(m.total().unwrap(), 4);
    }

    #[test]
    fn sqmag_counts_two() {
        let mut m = Meter::new();
        assert_eq!(m.sqmag(c(3.0, 4.0)), 25.0);
        assert_eq!(m.sqmag(ComplexScalar::ZERO), 0.0);
        assert_eq!(m.total().unwrap(), 4);
    }

    #[test]
    fn div_real_counts_one_and_rejects_zero() {
        let mut m = Meter::new();
        assert_eq!(m.div_real(6.0, 2.0).unwrap(), 3.0);
        assert_eq!(m.total().unwrap(), 1);
        assert!(matches!(
            m.div_real(1.0, 0.0),
            Err(NumericsError::DivisionByZero { .. })
        ));
        assert_eq!(m.total().unwrap(), 1);
    }

    #[test]
    fn unit_projection_costs_four() {
        let mut m = Meter::new();
        let (y, mag) = m.unit_project(c(3.0, -4.0), 1e-30).unwrap();
        assert_eq!(mag, 5.0);
        assert!((y.re - 0.6).abs() < 1e-15 && (y.im + 0.8).abs() < 1e-15);
        assert_eq!(m.total().unwrap(), 4);
        let s = m.snapshot().unwrap();
        assert_eq!(s.occurrences(Phase::Forward, MultKind::RealDivision), 2);
        assert_eq!(s.occurrences(Phase::Forward, MultKind::SquaredMagnitude), 1);
    }

    #[test]
    fn phases_are_separated() {
        let mut m = Meter::new();
        m.cmul(ComplexScalar::ONE, ComplexScalar::I);
        m.set_phase(Phase::BackwardDelta);
        m.cscale(ComplexScalar::ONE, 2.0);
        m.set_phase(Phase::ParameterUpdate);
        m.rmul(1.0, 2.0);
        let s = m.snapshot().unwrap();
        assert_eq!(s.phase_totals(), [4, 2, 1]);
        assert_eq!(s.kind_total(MultKind::ComplexTimesReal), 2);
    }

    #[test]
    fn reset_and_diff() {
        let mut m = Meter::new();
        m.cmul(ComplexScalar::ONE, ComplexScalar::ONE);
        let before = m.snapshot().unwrap();
        m.cmul(ComplexScalar::ONE, ComplexScalar::ONE);
        let after = m.snapshot().unwrap();
        assert_eq!(MultCounter::diff(&before, &after).unwrap().grand_total(), 4);
        assert!(matches!(
            MultCounter::diff(&after, &before),
            Err(NumericsError::NegativeDiff { .. })
        ));
        m.reset();
        assert_eq!(m.snapshot().unwrap(), MultCounter::default());
        assert_eq!(m.total().unwrap(), 0);
    }

    #[test]
    fn free_operations_do_not_count() {
        let mut m = Meter::new();
        let z = c(0.2, 0.1);
        let _ = z + z - z;
        let _ = -z.conj();
        let _ = z.tanh().sech().sinh();
        let _ = z.pow2_scale(3);
        let _ = fused_rate(z, 0.1);
        let _ = half_sq_norm(&[z]);
        assert_eq!(m.total().unwrap(), 0);
        m.set_phase(Phase::Forward);
        assert_eq!(m.total().unwrap(), 0);
    }

    #[test]
    fn overflow_is_an_error() {
        let mut m = Meter::new();
        m.total = u64::MAX - 1;
        m.cmul(ComplexScalar::ONE, ComplexScalar::ONE);
        assert_eq!(m.total(), Err(NumericsError::CounterOverflow));
        assert_eq!(m.snapshot(), Err(NumericsError::CounterOverflow));
    }
}
