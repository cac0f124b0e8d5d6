use crate::cost_model::{
    cost, regime_spec, ArchKind, AsymptoticRegime, ComplexityOrder, CostError, Mode,
};

use super::HarnessError;

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoteFit {
    /// Least-squares slope of `log cost` against `log N`.
    pub slope: f64,
    /// Integer order nearest to the slope, if it is 1, 2 or 3.
    pub order: Option<ComplexityOrder>,
    pub points: Vec<(usize, u64)>,
}

/// `2^lo, 2^(lo+1), ..., 2^hi`.
pub fn geometric_series(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|e| 1usize << e).collect()
}

/// Least-squares slope through `(ln x, ln y)`.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Evaluates the exact cost under a regime's coupling at each `N` and fits the
/// growth exponent.
pub fn empirical_asymptote(
    arch: ArchKind,
    regime: AsymptoticRegime,
    mode: Mode,
    series: &[usize],
) -> Result<AsymptoteFit, HarnessError> {
    if regime.is_deep() && !arch.supports_deep() {
        return Err(CostError::NotApplicable(arch).into());
    }
    let points = series
        .iter()
        .map(|&n| Ok((n, cost(&regime_spec(arch, regime, n)?, mode)?)))
        .collect::<Result<Vec<_>, CostError>>()?;
    let xy: Vec<(f64, f64)> = points.iter().map(|&(n, c)| (n as f64, c as f64)).collect();
    let slope = fit_slope(&xy).ok_or_else(|| {
        HarnessError::InvalidArgument("need at least two distinct N values".into())
    })?;
    Ok(AsymptoteFit {
        slope,
        order: ComplexityOrder::from_exponent(slope.round() as i64),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = (1..6)
            .map(|k| (k as f64, 3.0 * (k as f64).powi(2)))
            .collect();
        assert!((fit_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(fit_slope(&pts[..1]), None);
    }

    #[test]
    fn rbf_deep_regimes_not_applicable() {
        let err = empirical_asymptote(
            ArchKind::Crbf,
            AsymptoticRegime::DeepBalanced,
            Mode::Training,
            &[4, 8],
        );
        assert!(matches!(
            err,
            Err(HarnessError::Cost(CostError::NotApplicable(ArchKind::Crbf)))
        ));
    }
}
