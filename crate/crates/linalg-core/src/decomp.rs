use num_complex::Complex;
use num_traits::{One, Zero};

use crate::{LinalgError, Matrix, Real};

/// Relative anti-Hermitian residual beyond which a "Hermitian" input is rejected.
pub const HERMITIAN_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SpectralDecomposition<T: Real> {
    /// Descending.
    pub eigenvalues: Vec<T>,
    /// Columns aligned with `eigenvalues`.
    pub eigenvectors: Matrix<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.eigenvectors.column(k)
    }

    /// V f(Λ) V†
    pub fn map(&self, f: impl Fn(T) -> T) -> Matrix<T> {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let scaled = Matrix::from_fn(v.rows(), n, |i, k| v[(i, k)] * f(self.eigenvalues[k]));
        scaled.matmul(&v.adjoint())
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.map(|x| x)
    }
}

fn checked_hermitian<T: Real>(h: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::Shape(format!("expected a square matrix, got {:?}", h.shape())));
    }
    let res = h.hermiticity_residual().as_f64();
    let norm = h.frobenius_norm().as_f64();
    if res > HERMITIAN_TOL * norm.max(f64::MIN_POSITIVE) && res > 0.0 {
        return Err(LinalgError::NotHermitian { residual: res });
    }
    Ok(h.hermitian_part())
}

/// Rotates each column so its largest-magnitude entry is real and positive.
fn fix_column_phases<T: Real>(v: &mut Matrix<T>) {
    for j in 0..v.cols() {
        let mut best = 0;
        let mut best_abs = T::zero();
        for i in 0..v.rows() {
            let a = v[(i, j)].norm();
            if a > best_abs + T::lit(1e-12) {
                best_abs = a;
                best = i;
            }
        }
        if best_abs > T::zero() {
            let ph = v[(best, j)].conj() / best_abs;
            for i in 0..v.rows() {
                v[(i, j)] = v[(i, j)] * ph;
            }
        }
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
pub fn hermitian_eig<T: Real>(h: &Matrix<T>) -> Result<SpectralDecomposition<T>, LinalgError> {
    let hs = checked_hermitian(h)?;
    let n = hs.rows();
    let (vals, vecs) = T::eigh(n, hs.data())?;
    let mut eigenvectors = Matrix::from_fn(n, n, |i, k| vecs[i * n + (n - 1 - k)]);
    fix_column_phases(&mut eigenvectors);
    Ok(SpectralDecomposition {
        eigenvalues: vals.into_iter().rev().collect(),
        eigenvectors,
    })
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues<T: Real>(h: &Matrix<T>) -> Result<Vec<T>, LinalgError> {
    let hs = checked_hermitian(h)?;
    let mut v = T::eigvalsh(hs.rows(), hs.data())?;
    v.reverse();
    Ok(v)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue<T: Real>(h: &Matrix<T>) -> Result<T, LinalgError> {
    if h.rows() == 0 {
        return Ok(T::zero());
    }
    Ok(*hermitian_eigenvalues(h)?.last().expect("nonempty"))
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn max_eigenvalue<T: Real>(h: &Matrix<T>) -> Result<T, LinalgError> {
    if h.rows() == 0 {
        return Ok(T::zero());
    }
    Ok(hermitian_eigenvalues(h)?[0])
}

#[derive(Clone, Debug)]
pub struct Svd<T: Real> {
    pub u: Matrix<T>,
    /// Descending, length min(rows, cols).
    pub singular_values: Vec<T>,
    pub vdag: Matrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn reconstruct(&self) -> Matrix<T> {
        let (m, n) = (self.u.rows(), self.vdag.cols());
        let k = self.singular_values.len();
        let us = Matrix::from_fn(m, k, |i, j| self.u[(i, j)] * self.singular_values[j]);
        us.matmul(&self.vdag.submatrix(0, 0, k, n))
    }
}

pub fn svd<T: Real>(a: &Matrix<T>) -> Result<Svd<T>, LinalgError> {
    let (m, n) = a.shape();
    let (u, s, v) = T::svd(m, n, a.data())?;
    let v = Matrix::from_raw(n, n, v);
    Ok(Svd {
        u: Matrix::from_raw(m, m, u),
        singular_values: s,
        vdag: v.adjoint(),
    })
}

pub fn singular_values<T: Real>(a: &Matrix<T>) -> Result<Vec<T>, LinalgError> {
    Ok(svd(a)?.singular_values)
}

/// Largest singular value (spectral norm).
pub fn spectral_norm<T: Real>(a: &Matrix<T>) -> Result<T, LinalgError> {
    Ok(singular_values(a)?.first().copied().unwrap_or_else(T::zero))
}

/// Closest rank-`d` partial isometry to `x` in Frobenius norm: R = U·I_d·V†.
pub fn closest_isometry<T: Real>(x: &Matrix<T>, d: usize) -> Result<Matrix<T>, LinalgError> {
    let (m, n) = x.shape();
    if d > m.min(n) {
        return Err(LinalgError::RankTooLarge { rank: d, max: m.min(n) });
    }
    let s = svd(x)?;
    let ud = s.u.columns(0..d);
    let vd = s.vdag.submatrix(0, 0, d, n);
    Ok(ud.matmul(&vd))
}

#[derive(Clone, Debug)]
pub struct Schmidt<T: Real> {
    /// Descending, nonnegative.
    pub coefficients: Vec<T>,
    /// Vectors on the first factor (dimension d_s).
    pub left: Vec<Vec<Complex<T>>>,
    /// Vectors on the second factor (dimension d_c).
    pub right: Vec<Vec<Complex<T>>>,
}

impl<T: Real> Schmidt<T> {
    pub fn reconstruct(&self) -> Vec<Complex<T>> {
        let ds = self.left.first().map_or(0, Vec::len);
        let dc = self.right.first().map_or(0, Vec::len);
        let mut v = vec![Complex::zero(); ds * dc];
        for ((l, a), b) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            for s in 0..ds {
                for c in 0..dc {
                    v[s * dc + c] = v[s * dc + c] + a[s] * b[c] * *l;
                }
            }
        }
        v
    }
}

/// v = Σ λ_i x̂_i ⊗ x̃_i via the SVD of the d_s×d_c reshape.
pub fn schmidt_decompose<T: Real>(v: &[Complex<T>], d_s: usize, d_c: usize) -> Result<Schmidt<T>, LinalgError> {
    if v.len() != d_s * d_c {
        return Err(LinalgError::Shape(format!(
            "vector of length {} is not {d_s}x{d_c}",
            v.len()
        )));
    }
    let m = Matrix::from_raw(d_s, d_c, v.to_vec());
    let s = svd(&m)?;
    let k = s.singular_values.len();
    Ok(Schmidt {
        coefficients: s.singular_values.clone(),
        left: (0..k).map(|i| s.u.column(i)).collect(),
        right: (0..k).map(|i| s.vdag.row(i).to_vec()).collect(),
    })
}

/// Orthonormal basis (as columns) of the span of `vectors`.
///
/// Directions with singular value at most `tol·σ_max` are discarded.
pub fn orthonormal_span<T: Real>(vectors: &[Vec<Complex<T>>], tol: f64) -> Result<Matrix<T>, LinalgError> {
    let Some(first) = vectors.first() else {
        return Ok(Matrix::zeros(0, 0));
    };
    let n = first.len();
    let a = Matrix::from_columns(n, vectors)?;
    let s = svd(&a)?;
    let smax = s.singular_values.first().copied().unwrap_or_else(T::zero);
    if smax <= T::zero() {
        return Ok(Matrix::zeros(n, 0));
    }
    let rank = s
        .singular_values
        .iter()
        .take_while(|&&x| x > smax * T::lit(tol))
        .count();
    Ok(s.u.columns(0..rank))
}

/// Cholesky factorization A = L L† of a Hermitian positive definite matrix.
#[derive(Clone, Debug)]
pub struct Cholesky<T: Real> {
    l: Matrix<T>,
}

impl<T: Real> Cholesky<T> {
    pub fn new(a: &Matrix<T>) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::Shape(format!("cholesky of {:?}", a.shape())));
        }
        let n = a.rows();
        let raw = T::cholesky(n, a.data())?;
        let l = Matrix::from_fn(n, n, |i, j| if j <= i { raw[i * n + j] } else { Complex::zero() });
        Ok(Self { l })
    }

    pub fn lower(&self) -> &Matrix<T> {
        &self.l
    }

    /// Solves L y = b.
    pub fn forward(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.l.rows();
        let mut y = b.to_vec();
        for i in 0..n {
            let row = self.l.row(i);
            let mut acc = y[i];
            for k in 0..i {
                acc = acc - row[k] * y[k];
            }
            y[i] = acc / row[i];
        }
        y
    }

    /// Solves L† x = y.
    pub fn backward(&self, y: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.l.rows();
        let mut x = y.to_vec();
        for i in (0..n).rev() {
            let mut acc = x[i];
            for k in i + 1..n {
                acc = acc - self.l[(k, i)].conj() * x[k];
            }
            x[i] = acc / self.l[(i, i)].conj();
        }
        x
    }

    /// Solves A x = b.
    pub fn solve(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        self.backward(&self.forward(b))
    }

    /// L⁻¹ M L⁻†, used for step lengths along a Hermitian direction.
    pub fn congruence_inverse(&self, m: &Matrix<T>) -> Matrix<T> {
        let n = self.l.rows();
        let mut half = Matrix::zeros(n, n);
        for j in 0..n {
            half.set_column(j, &self.forward(&m.column(j)));
        }
        let half_adj = half.adjoint();
        let mut out = Matrix::zeros(n, n);
        for j in 0..n {
            out.set_column(j, &self.forward(&half_adj.column(j)));
        }
        out.adjoint().hermitian_part()
    }

    pub fn inverse(&self) -> Matrix<T> {
        let n = self.l.rows();
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![Complex::zero(); n];
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = Complex::zero());
            e[j] = Complex::one();
            inv.set_column(j, &self.solve(&e));
        }
        inv.hermitian_part()
    }
}

/// Inverse of a Hermitian positive definite matrix.
pub fn inverse_hpd<T: Real>(a: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    Ok(Cholesky::new(a)?.inverse())
}

/// Principal square root of a PSD matrix, negative eigenvalues clamped at zero.
pub fn psd_sqrt<T: Real>(a: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    let e = hermitian_eig(a)?;
    Ok(e.map(|x| x.max(T::zero()).sqrt()))
}
