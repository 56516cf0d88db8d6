//! Finite-size analysis on top of sweep tables.

use serde::{Deserialize, Serialize};

use super::{grid_peak, Column, SweepTable};
use crate::error::{Error, Result};

/// `max GD = m (N − 2) + 1`, least squares with the intercept pinned at
/// `N = 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub residuals: Vec<f64>,
    pub points: Vec<(usize, f64)>,
}

pub fn fit_scaling(points: &[(usize, f64)]) -> Result<ScalingFit> {
    if points.is_empty() {
        return Err(Error::DegenerateFit("no points".into()));
    }
    if points.iter().any(|&(n, g)| n < 2 || !g.is_finite()) {
        return Err(Error::DegenerateFit("points need N ≥ 2 and finite values".into()));
    }
    let (num, den) = points.iter().fold((0.0, 0.0), |(num, den), &(n, g)| {
        let x = n as f64 - 2.0;
        (num + x * (g - 1.0), den + x * x)
    });
    if den == 0.0 {
        return Err(Error::DegenerateFit("every point has N = 2".into()));
    }
    let slope = num / den;
    let residuals = points.iter().map(|&(n, g)| g - (slope * (n as f64 - 2.0) + 1.0)).collect();
    Ok(ScalingFit { slope, residuals, points: points.to_vec() })
}

/// Slack allowed when checking that peaks approach `B/J = 1`.
pub const DRIFT_SLACK: f64 = 5e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    /// `(N, |(B/J)* − 1|)`, sorted by N.
    pub deviations: Vec<(usize, f64)>,
    pub non_increasing: bool,
}

pub fn peak_drift(peaks: &[(usize, f64)]) -> Result<DriftReport> {
    let mut deviations: Vec<(usize, f64)> = peaks.iter().map(|&(n, r)| (n, (r - 1.0).abs())).collect();
    deviations.sort_by_key(|d| d.0);
    deviations.dedup_by_key(|d| d.0);
    if deviations.len() < 3 {
        return Err(Error::Domain("peak drift needs at least three ring sizes".into()));
    }
    let non_increasing = deviations.windows(2).all(|w| w[1].1 <= w[0].1 + DRIFT_SLACK);
    Ok(DriftReport { deviations, non_increasing })
}

/// `var_E` divided by its maximum over the table.
pub fn normalized_variance(table: &SweepTable) -> Result<Vec<Option<f64>>> {
    let (_, peak) = grid_peak(table, Column::VarE)?;
    if peak.value <= 0.0 {
        return Err(Error::Domain("variance column is identically zero".into()));
    }
    Ok(table.column(Column::VarE).into_iter().map(|v| v.map(|v| v / peak.value)).collect())
}

/// GD plotted against the entanglement spread, parameterized by `B/J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParametricTrace {
    /// `(B/J, GD, ΔE)` in ratio order.
    pub points: Vec<(f64, f64, f64)>,
    pub gd_peak_ratio: f64,
    pub spread_peak_ratio: f64,
    /// Start and end points differ.
    pub open: bool,
}

pub fn parametric_trace(table: &SweepTable) -> Result<ParametricTrace> {
    let points: Vec<(f64, f64, f64)> = table
        .rows
        .iter()
        .filter_map(|r| Some((r.ratio, r.gd?, r.var_e?.max(0.0).sqrt())))
        .collect();
    if points.len() < 2 {
        return Err(Error::Domain("trace needs GD and var_E on at least two rows".into()));
    }
    let argmax = |key: fn(&(f64, f64, f64)) -> f64| {
        points.iter().max_by(|a, b| key(a).total_cmp(&key(b))).map(|p| p.0).unwrap_or(f64::NAN)
    };
    let (first, last) = (points[0], points[points.len() - 1]);
    let open = (first.1 - last.1).abs() > 1e-6 || (first.2 - last.2).abs() > 1e-6;
    Ok(ParametricTrace {
        gd_peak_ratio: argmax(|p| p.1),
        spread_peak_ratio: argmax(|p| p.2),
        points,
        open,
    })
}
