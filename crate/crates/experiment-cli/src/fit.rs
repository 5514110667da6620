use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::ExperimentError;

/// Least-squares polynomial `F(x) ≈ Σ_i c_i x^i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Ascending degree: `c₀, c₁, c₂, …`.
    pub coefficients: Vec<f64>,
    /// Euclidean norm of the fit residuals.
    pub residual: f64,
    pub fit_range: (f64, f64),
    /// Samples that fell inside the range.
    pub points: usize,
}

impl FitResult {
    pub fn coefficient(&self, i: usize) -> f64 {
        self.coefficients.get(i).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// Fits the samples with `x` in `range` (inclusive). Needs at least
/// `degree + 2` of them.
pub fn fit_polynomial(samples: &[(f64, f64)], degree: usize, range: (f64, f64)) -> Result<FitResult, ExperimentError> {
    let tol = 1e-12 * range.1.abs().max(1.0);
    let inside: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|(x, y)| *x >= range.0 - tol && *x <= range.1 + tol && y.is_finite())
        .collect();
    if inside.len() < degree + 2 {
        return Err(ExperimentError::Fit(format!(
            "{} points in [{}, {}] for degree {degree}",
            inside.len(),
            range.0,
            range.1
        )));
    }
    let a = DMatrix::from_fn(inside.len(), degree + 1, |i, j| inside[i].0.powi(j as i32));
    let b = DVector::from_iterator(inside.len(), inside.iter().map(|p| p.1));
    let c = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| ExperimentError::Fit(e.to_string()))?;
    let residual = (&a * &c - &b).norm();
    let coefficients: Vec<f64> = c.iter().copied().collect();
    if coefficients.iter().any(|v| !v.is_finite()) {
        return Err(ExperimentError::Fit("non-finite coefficients".into()));
    }
    Ok(FitResult {
        coefficients,
        residual,
        fit_range: range,
        points: inside.len(),
    })
}
