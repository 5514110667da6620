use qer_linalg::{Complex, Matrix, Real};
use qer_ops::DataMatrix;

use crate::OptimalError;

/// `Σ_λ f(λ) C(λ)` for a discrete distribution over channel parameters.
/// Factors are stacked (scaled by `√f(λ)`) when every sample carries one.
pub fn robust_data_matrix<T: Real>(samples: &[(T, DataMatrix<T>)]) -> Result<DataMatrix<T>, OptimalError> {
    let (_, first) = samples
        .first()
        .ok_or_else(|| OptimalError::Invalid("no channel samples".into()))?;
    let (d_s, d_c) = (first.d_s(), first.d_c());
    if samples.iter().any(|(_, c)| c.d_s() != d_s || c.d_c() != d_c) {
        return Err(OptimalError::Dimension("samples have different dimensions".into()));
    }
    if samples.iter().any(|(w, _)| w.as_f64() < 0.0 || !w.as_f64().is_finite()) {
        return Err(OptimalError::Invalid("negative weight".into()));
    }
    let total: f64 = samples.iter().map(|(w, _)| w.as_f64()).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(OptimalError::Invalid(format!("weights sum to {total}")));
    }
    if samples.iter().all(|(_, c)| c.factor().is_some()) {
        let mut columns: Vec<Vec<Complex<T>>> = Vec::new();
        for (w, c) in samples {
            let b = c.factor().expect("checked above");
            let s = w.sqrt();
            columns.extend((0..b.cols()).map(|j| b.column(j).into_iter().map(|z| z * s).collect()));
        }
        let factor = Matrix::from_columns(d_s * d_c, &columns)?;
        return Ok(DataMatrix::from_factor(factor, d_s, d_c)?);
    }
    let mut sum = Matrix::zeros(d_s * d_c, d_s * d_c);
    for (w, c) in samples {
        sum = &sum + &c.matrix().scale(*w);
    }
    Ok(DataMatrix::from_matrix(sum, d_s, d_c)?)
}
