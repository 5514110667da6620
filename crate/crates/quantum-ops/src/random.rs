//! Seedable random states, unitaries and channels.

use qer_linalg::{closest_isometry, Complex, Matrix, Real};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{DensityMatrix, QuantumChannel};

pub fn gaussian_vector<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex<T>> {
    (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect()
}

/// Matrix with independent standard complex Gaussian entries.
pub fn gaussian_matrix<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix<T> {
    Matrix::new(rows, cols, gaussian_vector(rows * cols, rng)).expect("finite entries")
}

/// Haar-random unit vector.
pub fn pure_state<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex<T>> {
    let v = gaussian_vector::<T, R>(d, rng);
    let n = qer_linalg::vec_norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Haar-random `rows × cols` isometry (`rows ≥ cols`).
pub fn isometry<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix<T> {
    assert!(rows >= cols, "isometry needs rows >= cols");
    closest_isometry(&gaussian_matrix(rows, cols, rng), cols).expect("full rank with probability one")
}

pub fn unitary<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix<T> {
    isometry(d, d, rng)
}

/// Random density matrix of the given rank (Hilbert-Schmidt induced measure).
pub fn density<T: Real, R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> DensityMatrix<T> {
    let g = gaussian_matrix::<T, R>(d, rank.max(1), rng);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(T::one() / tr)).expect("positive by construction")
}

/// Random CPTP map cut from a Haar isometry. Uses `num_kraus` operators,
/// raised to `⌈d_in / d_out⌉` when fewer cannot be trace preserving.
pub fn channel<T: Real, R: Rng + ?Sized>(d_in: usize, d_out: usize, num_kraus: usize, rng: &mut R) -> QuantumChannel<T> {
    let num_kraus = num_kraus.max(d_in.div_ceil(d_out));
    let v = isometry::<T, R>(num_kraus * d_out, d_in, rng);
    let kraus = (0..num_kraus).map(|k| v.submatrix(k * d_out, 0, d_out, d_in)).collect();
    QuantumChannel::new(kraus).expect("isometry blocks are trace preserving")
}
