use std::fmt::{Debug, Display};

use faer::{Mat, MatRef, Side};
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

use crate::LinalgError;

/// Real scalar the whole toolkit is generic over.
///
/// Besides the usual float arithmetic, the trait carries the dense kernels
/// (products, Hermitian eigensolver, SVD, Cholesky) for its complex
/// counterpart. All buffers are row-major.
pub trait Real:
    Float + FloatConst + FromPrimitive + Default + Debug + Display + Send + Sync + 'static
{
    /// Unit roundoff used to scale tolerances.
    const EPS: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("representable literal")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `a` is m×k, `b` is k×n.
    fn gemm(m: usize, k: usize, n: usize, a: &[Complex<Self>], b: &[Complex<Self>]) -> Vec<Complex<Self>>;

    /// Eigenvalues ascending, eigenvectors as columns of a row-major n×n buffer.
    fn eigh(n: usize, a: &[Complex<Self>]) -> Result<(Vec<Self>, Vec<Complex<Self>>), LinalgError>;

    /// Eigenvalues only, ascending.
    fn eigvalsh(n: usize, a: &[Complex<Self>]) -> Result<Vec<Self>, LinalgError>;

    /// Full SVD of an m×n matrix: (U m×m, σ descending, V n×n), A = U Σ V†.
    #[allow(clippy::type_complexity)]
    fn svd(m: usize, n: usize, a: &[Complex<Self>]) -> Result<(Vec<Complex<Self>>, Vec<Self>, Vec<Complex<Self>>), LinalgError>;

    /// Lower Cholesky factor of a Hermitian positive definite matrix.
    fn cholesky(n: usize, a: &[Complex<Self>]) -> Result<Vec<Complex<Self>>, LinalgError>;
}

fn view<T>(rows: usize, cols: usize, a: &[T]) -> MatRef<'_, T> {
    MatRef::from_row_major_slice(a, rows, cols)
}

fn collect<T: Copy>(m: MatRef<'_, T>) -> Vec<T> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

macro_rules! impl_real {
    ($t:ty, $eps:expr) => {
        impl Real for $t {
            const EPS: f64 = $eps;

            fn gemm(m: usize, k: usize, n: usize, a: &[Complex<Self>], b: &[Complex<Self>]) -> Vec<Complex<Self>> {
                if m == 0 || n == 0 {
                    return Vec::new();
                }
                if k == 0 {
                    return vec![Complex::new(0.0, 0.0); m * n];
                }
                let p: Mat<Complex<$t>> = view(m, k, a) * view(k, n, b);
                collect(p.as_ref())
            }

            fn eigh(n: usize, a: &[Complex<Self>]) -> Result<(Vec<Self>, Vec<Complex<Self>>), LinalgError> {
                if n == 0 {
                    return Ok((Vec::new(), Vec::new()));
                }
                let e = view(n, n, a)
                    .self_adjoint_eigen(Side::Lower)
                    .map_err(|_| LinalgError::NoConvergence("hermitian eigensolver"))?;
                let s = e.S();
                let vals = (0..n).map(|i| s[i].re).collect();
                Ok((vals, collect(e.U())))
            }

            fn eigvalsh(n: usize, a: &[Complex<Self>]) -> Result<Vec<Self>, LinalgError> {
                if n == 0 {
                    return Ok(Vec::new());
                }
                view(n, n, a)
                    .self_adjoint_eigenvalues(Side::Lower)
                    .map_err(|_| LinalgError::NoConvergence("hermitian eigensolver"))
            }

            fn svd(m: usize, n: usize, a: &[Complex<Self>]) -> Result<(Vec<Complex<Self>>, Vec<Self>, Vec<Complex<Self>>), LinalgError> {
                if m == 0 || n == 0 {
                    let eye = |d: usize| {
                        let mut v = vec![Complex::new(0.0, 0.0); d * d];
                        for i in 0..d {
                            v[i * d + i] = Complex::new(1.0, 0.0);
                        }
                        v
                    };
                    return Ok((eye(m), Vec::new(), eye(n)));
                }
                let d = view(m, n, a).svd().map_err(|_| LinalgError::NoConvergence("svd"))?;
                let s = d.S();
                let k = m.min(n);
                let sig = (0..k).map(|i| s[i].re).collect();
                Ok((collect(d.U()), sig, collect(d.V())))
            }

            fn cholesky(n: usize, a: &[Complex<Self>]) -> Result<Vec<Complex<Self>>, LinalgError> {
                if n == 0 {
                    return Ok(Vec::new());
                }
                let l = view(n, n, a).llt(Side::Lower).map_err(|_| LinalgError::NotPositiveDefinite)?;
                Ok(collect(l.L()))
            }
        }
    };
}

impl_real!(f64, f64::EPSILON);
impl_real!(f32, f32::EPSILON as f64);
