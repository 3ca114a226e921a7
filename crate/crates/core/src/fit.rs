//! Least-squares line fits used for convergence-rate and growth estimates.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn least_squares(points: &[(f64, f64)]) -> LinearFit {
    let n = points.len() as f64;
    if points.is_empty() {
        return LinearFit {
            slope: f64::NAN,
            intercept: f64::NAN,
            residual: f64::NAN,
        };
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss: f64 = points
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    LinearFit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
    }
}

/// Fit of `ln gap` against `ln N` over the last `tail` points with positive gaps.
pub fn loglog_rate(ns: &[usize], gaps: &[f64], tail: usize) -> LinearFit {
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(gaps)
        .filter(|(_, &g)| g > 0.0 && g.is_finite())
        .map(|(&n, &g)| ((n as f64).ln(), g.ln()))
        .collect();
    let start = pts.len().saturating_sub(tail);
    least_squares(&pts[start..])
}
