use num_complex::Complex;
use num_traits::Zero;

use crate::{LinalgError, Matrix, Real};

/// Row-major double-ket |A⟩⟩ of a d_out×d_in operator.
///
/// The amplitude at `i·d_in + j` is `A[i][j]`, so the target space is the
/// first (most significant) tensor factor.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorizedOperator<T: Real> {
    pub d_in: usize,
    pub d_out: usize,
    pub amplitudes: Vec<Complex<T>>,
}

impl<T: Real> VectorizedOperator<T> {
    pub fn new(d_out: usize, d_in: usize, amplitudes: Vec<Complex<T>>) -> Result<Self, LinalgError> {
        if amplitudes.len() != d_out * d_in {
            return Err(LinalgError::Shape(format!(
                "{} amplitudes for a {d_out}x{d_in} operator",
                amplitudes.len()
            )));
        }
        Ok(Self { d_in, d_out, amplitudes })
    }

    /// ⟨⟨self|other⟩⟩
    pub fn inner(&self, other: &Self) -> Complex<T> {
        crate::vec_inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn devectorize(&self) -> Matrix<T> {
        Matrix::from_raw(self.d_out, self.d_in, self.amplitudes.clone())
    }
}

pub fn vectorize<T: Real>(a: &Matrix<T>) -> VectorizedOperator<T> {
    VectorizedOperator {
        d_in: a.cols(),
        d_out: a.rows(),
        amplitudes: a.data().to_vec(),
    }
}

pub fn devectorize<T: Real>(v: &VectorizedOperator<T>) -> Matrix<T> {
    v.devectorize()
}

/// Which tensor factor of a bipartite operator to trace out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// The most significant factor (dimension `d_a`).
    First,
    /// The least significant factor (dimension `d_b`).
    Second,
}

/// Partial trace of an operator on a d_a ⊗ d_b space.
///
/// For vectorized operators, tracing [`Factor::First`] of |A⟩⟩⟨⟨B| gives
/// conj(A†B) and tracing [`Factor::Second`] gives AB†.
pub fn partial_trace<T: Real>(m: &Matrix<T>, d_a: usize, d_b: usize, side: Factor) -> Result<Matrix<T>, LinalgError> {
    let n = d_a * d_b;
    if m.rows() != n || m.cols() != n {
        return Err(LinalgError::Shape(format!(
            "partial trace of {:?} over a {d_a}x{d_b} split",
            m.shape()
        )));
    }
    Ok(match side {
        Factor::First => Matrix::from_fn(d_b, d_b, |j, l| {
            (0..d_a).fold(Complex::zero(), |acc, i| acc + m[(i * d_b + j, i * d_b + l)])
        }),
        Factor::Second => Matrix::from_fn(d_a, d_a, |i, k| {
            (0..d_b).fold(Complex::zero(), |acc, j| acc + m[(i * d_b + j, k * d_b + j)])
        }),
    })
}

/// I_{d_a} ⊗ B
pub fn identity_kron<T: Real>(d_a: usize, b: &Matrix<T>) -> Matrix<T> {
    let db = b.rows();
    let mut out = Matrix::zeros(d_a * db, d_a * db);
    for s in 0..d_a {
        for i in 0..db {
            for j in 0..db {
                out[(s * db + i, s * db + j)] = b[(i, j)];
            }
        }
    }
    out
}
