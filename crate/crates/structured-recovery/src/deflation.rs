use qer_linalg::{hermitian_eig, Complex, Matrix, Real};
use qer_ops::DataMatrix;

use crate::subspace::dual_side;
use crate::StructuredError;

/// Relative squared norm below which a deflated factor column is discarded.
const DROPPED_COLUMN: f64 = 1e-26;

fn column_norm2<T: Real>(f: &Matrix<T>, j: usize) -> f64 {
    (0..f.rows()).map(|i| f[(i, j)].norm_sqr().as_f64()).sum()
}

fn max_column_norm2<T: Real>(f: &Matrix<T>) -> f64 {
    (0..f.cols()).map(|j| column_norm2(f, j)).fold(0.0, f64::max)
}

enum Rep<T: Real> {
    Dense(Matrix<T>),
    /// `C_k = F F†` with the Gram matrix `F† F` kept alongside. Columns
    /// that deflation has annihilated are dropped.
    Factor { f: Matrix<T>, gram: Matrix<T>, scale: f64 },
}

/// The data matrix compressed onto the part of the code space not yet
/// assigned to a syndrome, `(I ⊗ Q̄) C (I ⊗ Q̄)`.
pub(crate) struct Deflator<T: Real> {
    d_s: usize,
    rep: Rep<T>,
}

impl<T: Real> Deflator<T> {
    pub fn new(data: &DataMatrix<T>) -> Self {
        let rep = match data.factor() {
            Some(f) if f.cols() < data.dim() => Rep::Factor {
                gram: f.adjoint().matmul(f).hermitian_part(),
                scale: max_column_norm2(f),
                f: f.clone(),
            },
            _ => Rep::Dense(data.matrix().clone()),
        };
        Self { d_s: data.d_s(), rep }
    }

    /// Up to `count` leading eigenpairs with eigenvalue above `floor`.
    pub fn top(&self, count: usize, floor: f64) -> Result<Vec<(T, Vec<Complex<T>>)>, StructuredError> {
        let mut out = Vec::with_capacity(count);
        match &self.rep {
            Rep::Dense(c) => {
                let eig = hermitian_eig(c)?;
                for (k, &lam) in eig.eigenvalues.iter().enumerate().take(count) {
                    if lam.as_f64() <= floor {
                        break;
                    }
                    out.push((lam, eig.vector(k)));
                }
            }
            Rep::Factor { f, gram, .. } => {
                let eig = hermitian_eig(gram)?;
                for (k, &lam) in eig.eigenvalues.iter().enumerate().take(count) {
                    if lam.as_f64() <= floor {
                        break;
                    }
                    let s = T::one() / lam.sqrt();
                    out.push((lam, f.matvec(&eig.vector(k)).into_iter().map(|z| z * s).collect()));
                }
            }
        }
        Ok(out)
    }

    /// Removes span(`basis`) from the code side.
    pub fn remove(&mut self, basis: &Matrix<T>) {
        let bt = basis.transpose();
        let bc = basis.conj();
        let d_s = self.d_s;
        match &mut self.rep {
            Rep::Dense(c) => {
                let proj = |m: &Matrix<T>| m - &dual_side(&dual_side(m, &bt, d_s), &bc, d_s);
                let left = proj(c);
                *c = proj(&left.adjoint()).adjoint().hermitian_part();
            }
            Rep::Factor { f, gram, scale } => {
                let d = dual_side(f, &bt, d_s);
                let g = &*f - &dual_side(&d, &bc, d_s);
                let keep: Vec<usize> = (0..g.cols())
                    .filter(|&j| column_norm2(&g, j) > DROPPED_COLUMN * *scale)
                    .collect();
                *f = Matrix::from_fn(g.rows(), keep.len(), |i, j| g[(i, keep[j])]);
                *gram = f.adjoint().matmul(f).hermitian_part();
            }
        }
    }
}
