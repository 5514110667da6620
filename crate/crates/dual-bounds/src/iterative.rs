use qer_linalg::{hermitian_eig, identity_kron, schmidt_decompose, Matrix, Real};
use qer_ops::DataMatrix;
use qer_optimal::DualCertificate;

use crate::DualError;

#[derive(Clone, Copy, Debug)]
pub struct RepairOptions {
    /// Stop once `λ_min(I ⊗ Y − C) ≥ −tol`.
    pub tol: f64,
    /// Update budget; `None` means `4 · d_S · d_C`.
    pub max_iters: Option<usize>,
    /// Eigenvalues this close to the most negative one count as tied.
    pub tie_tol: f64,
}

impl Default for RepairOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iters: None,
            tie_tol: 1e-12,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DualRepair<T: Real> {
    pub y: Matrix<T>,
    pub iterations: usize,
    /// `λ_min(I ⊗ Y − C)` at the returned point.
    pub min_eigenvalue: f64,
    /// `tr Y` before each update and at the end.
    pub traces: Vec<f64>,
    /// Eigenvalues below `−tol` before each update and at the end.
    pub negative_counts: Vec<usize>,
}

/// Rank-one repair of `Y` against a kernel `K` on `d_s ⊗ (K.rows() / d_s)`.
///
/// Each step takes the most negative eigenpair `(x, |v⟩⟩)` of `I ⊗ Y − K`,
/// Schmidt-decomposes `|v⟩⟩ = Σ λ_i |a_i⟩|b_i⟩` and adds
/// `(|x| / λ_1²) |b_1⟩⟨b_1|` to `Y`, which lifts `⟨⟨v|Z|v⟩⟩` to zero.
pub fn repair_kernel<T: Real>(
    y0: &Matrix<T>,
    kernel: &Matrix<T>,
    d_s: usize,
    options: &RepairOptions,
) -> Result<DualRepair<T>, DualError> {
    let n = kernel.rows();
    if d_s == 0 || n % d_s != 0 || !kernel.is_square() {
        return Err(DualError::Dimension(format!("kernel {:?} for d_S = {d_s}", kernel.shape())));
    }
    let d_c = n / d_s;
    if y0.shape() != (d_c, d_c) {
        return Err(DualError::Dimension(format!("dual point {:?} for d_C = {d_c}", y0.shape())));
    }
    let max_iters = options.max_iters.unwrap_or(4 * n);
    let mut y = y0.hermitian_part();
    let mut traces = Vec::new();
    let mut negative_counts = Vec::new();
    for it in 0.. {
        let z = (&identity_kron(d_s, &y) - kernel).hermitian_part();
        let eig = hermitian_eig(&z)?;
        let lo = eig.eigenvalues[n - 1].as_f64();
        traces.push(y.trace().re.as_f64());
        negative_counts.push(eig.eigenvalues.iter().filter(|v| v.as_f64() < -options.tol).count());
        if lo >= -options.tol {
            return Ok(DualRepair {
                y,
                iterations: it,
                min_eigenvalue: lo,
                traces,
                negative_counts,
            });
        }
        if it == max_iters {
            return Err(DualError::MaxIterations {
                iterations: it,
                residual: -lo,
                best: Box::new(y.cast()),
            });
        }
        let mut pick: Option<(T, T, Vec<_>)> = None;
        for k in (0..n).rev() {
            let x = eig.eigenvalues[k];
            if x.as_f64() > lo + options.tie_tol {
                break;
            }
            let s = schmidt_decompose(&eig.vector(k), d_s, d_c)?;
            let l1 = s.coefficients[0];
            if pick.as_ref().is_none_or(|(_, best, _)| l1 > *best) {
                pick = Some((x, l1, s.right[0].clone()));
            }
        }
        let (x, l1, b) = pick.expect("at least the minimum eigenpair");
        y.axpy(qer_linalg::cr(x.abs() / (l1 * l1)), &Matrix::outer(&b, &b));
    }
    unreachable!()
}

/// [`repair_kernel`] on a data matrix, returning the repaired certificate.
pub fn iterative_dual<T: Real>(
    y0: &Matrix<T>,
    data: &DataMatrix<T>,
    options: &RepairOptions,
) -> Result<DualCertificate<T>, DualError> {
    let r = repair_kernel(y0, data.matrix(), data.d_s(), options)?;
    Ok(DualCertificate::new(r.y, data)?)
}
