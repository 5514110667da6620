use qer_linalg::{hermitian_eig, Matrix, Real};

use crate::StructuredError;

/// `(I_{d_s} ⊗ op) m` for `m` with `d_s · op.cols()` rows.
pub(crate) fn dual_side<T: Real>(m: &Matrix<T>, op: &Matrix<T>, d_s: usize) -> Matrix<T> {
    let (a, dc) = op.shape();
    assert_eq!(m.rows(), d_s * dc, "row count must be d_s * op.cols()");
    let k = m.cols();
    let mut out = Matrix::zeros(d_s * a, k);
    for s in 0..d_s {
        let block = op.matmul(&m.submatrix(s * dc, 0, dc, k));
        out.data_mut()[s * a * k..(s + 1) * a * k].copy_from_slice(block.data());
    }
    out
}

/// Kernel seen by recoveries supported on span(`basis`):
/// `(I ⊗ Bᵀ) C (I ⊗ B̄)` on `d_S ⊗ d_q`.
pub fn reduce_kernel<T: Real>(c: &Matrix<T>, basis: &Matrix<T>, d_s: usize) -> Matrix<T> {
    let bt = basis.transpose();
    let left = dual_side(c, &bt, d_s);
    dual_side(&left.adjoint(), &bt, d_s).adjoint().hermitian_part()
}

/// `B̄ Y_q Bᵀ`: a dual point on the subspace written on the full dual-code space.
pub fn lift_dual<T: Real>(y_q: &Matrix<T>, basis: &Matrix<T>) -> Matrix<T> {
    basis.conj().matmul(y_q).matmul(&basis.transpose())
}

/// `Bᵀ Y B̄`, the inverse of [`lift_dual`] on the subspace.
pub fn restrict_dual<T: Real>(y: &Matrix<T>, basis: &Matrix<T>) -> Matrix<T> {
    basis.transpose().matmul(y).matmul(&basis.conj())
}

/// Orthonormal basis of the orthogonal complement of the given column bases.
pub fn complement_basis<T: Real>(bases: &[Matrix<T>], dim: usize) -> Result<Matrix<T>, StructuredError> {
    let mut q = Matrix::identity(dim);
    for b in bases {
        if b.rows() != dim {
            return Err(StructuredError::Invalid(format!("basis with {} rows in dimension {dim}", b.rows())));
        }
        q = &q - &b.matmul(&b.adjoint());
    }
    let eig = hermitian_eig(&q.hermitian_part())?;
    let rank = eig.eigenvalues.iter().filter(|v| v.as_f64() > 0.5).count();
    Ok(eig.eigenvectors.columns(0..rank))
}
