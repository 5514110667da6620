use qer_linalg::{identity_kron, min_eigenvalue, Matrix, Real};
use qer_ops::DataMatrix;

use crate::DualError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeasibilityCheck {
    pub feasible: bool,
    /// `λ_min(I ⊗ Y − C)`
    pub min_eigenvalue: f64,
}

/// Whether `I ⊗ Y − C ⪰ −tol`.
pub fn is_dual_feasible<T: Real>(y: &Matrix<T>, data: &DataMatrix<T>, tol: f64) -> Result<FeasibilityCheck, DualError> {
    if y.shape() != (data.d_c(), data.d_c()) {
        return Err(DualError::Dimension(format!("dual point {:?} for d_C = {}", y.shape(), data.d_c())));
    }
    let z = (&identity_kron(data.d_s(), &y.hermitian_part()) - data.matrix()).hermitian_part();
    let lo = min_eigenvalue(&z)?.as_f64();
    Ok(FeasibilityCheck {
        feasible: lo >= -tol,
        min_eigenvalue: lo,
    })
}
