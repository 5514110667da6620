//! Dense complex linear algebra for channel-adapted error recovery.
//!
//! Matrices are row-major and generic over a [`Real`] scalar (`f32` or
//! `f64`). Operator vectorization is row-major, so for conformable `M`, `N`,
//! `C`:
//!
//! ```text
//! (M ⊗ conj(N)) |C⟩⟩ = |M C N†⟩⟩,   ⟨⟨A|B⟩⟩ = tr(A†B)
//! ```

mod decomp;
mod matrix;
mod scalar;
mod vectorize;

pub use decomp::{
    closest_isometry, hermitian_eig, hermitian_eigenvalues, inverse_hpd, max_eigenvalue, min_eigenvalue,
    orthonormal_span, psd_sqrt, schmidt_decompose, singular_values, spectral_norm, svd, Cholesky, Schmidt,
    SpectralDecomposition, Svd, HERMITIAN_TOL,
};
pub use matrix::{kron_all, vec_inner, vec_norm, Matrix};
pub use num_complex::Complex;
pub use scalar::Real;
pub use vectorize::{devectorize, identity_kron, partial_trace, vectorize, Factor, VectorizedOperator};

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;
pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type SpectralDecomposition64 = SpectralDecomposition<f64>;
pub type Svd64 = Svd<f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("requested rank {rank} exceeds {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
}

/// Shorthand for a complex number with real part `re` and imaginary part `im`.
pub fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Real number as a complex scalar.
pub fn cr<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}
