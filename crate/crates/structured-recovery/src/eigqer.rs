use qer_linalg::{svd, Complex, Matrix, Real};
use qer_ops::DataMatrix;

use crate::deflation::Deflator;
use crate::{RecoveryForm, StructuredError, StructuredRecovery, SyndromeBlock};

#[derive(Clone, Copy, Debug)]
pub struct EigQerOptions {
    /// Singular values of the reshaped eigenvector with `σ² ≥ rank_threshold`
    /// set the syndrome rank.
    pub rank_threshold: f64,
    /// Stop once a syndrome would contribute less than this.
    pub contribution_threshold: f64,
    /// Tolerance of the subspace SDPs.
    pub sdp_tol: f64,
}

impl Default for EigQerOptions {
    fn default() -> Self {
        Self {
            rank_threshold: 0.05,
            contribution_threshold: 1e-6,
            sdp_tol: 1e-9,
        }
    }
}

impl EigQerOptions {
    /// Runs until the syndromes span the code space or the data matrix is exhausted.
    pub fn complete() -> Self {
        Self {
            contribution_threshold: 0.0,
            ..Self::default()
        }
    }
}

/// Eigenvalues below this fraction of the initial leading eigenvalue count as zero.
pub(crate) const EXHAUSTED: f64 = 1e-13;

/// Orthonormal right singular vectors of `devec(v)` with `σ² ≥ threshold`,
/// at least one.
pub(crate) fn support<T: Real>(v: &[Complex<T>], d_s: usize, d_c: usize, threshold: f64) -> Result<(Matrix<T>, Matrix<T>), StructuredError> {
    let x = Matrix::new(d_s, d_c, v.to_vec())?;
    let s = svd(&x)?;
    let d = s
        .singular_values
        .iter()
        .filter(|&&sv| (sv * sv).as_f64() >= threshold)
        .count()
        .max(1);
    Ok((s.u.columns(0..d), s.vdag.submatrix(0, 0, d, d_c).adjoint()))
}

/// Greedy extraction of isometric syndromes into `blocks`, continuing from
/// an already deflated data matrix.
pub(crate) fn extend_greedy<T: Real>(
    data: &DataMatrix<T>,
    deflator: &mut Deflator<T>,
    blocks: &mut Vec<SyndromeBlock<T>>,
    options: &EigQerOptions,
) -> Result<(), StructuredError> {
    let (d_s, d_c) = (data.d_s(), data.d_c());
    let mut used: usize = blocks.iter().map(SyndromeBlock::rank).sum();
    let mut floor = None;
    while used < d_c {
        let top = deflator.top(1, floor.unwrap_or(0.0))?;
        let Some((lam, v)) = top.into_iter().next() else { break };
        let floor_val = *floor.get_or_insert(EXHAUSTED * lam.as_f64());
        if lam.as_f64() <= floor_val {
            break;
        }
        let (u, v_cols) = support(&v, d_s, d_c, options.rank_threshold)?;
        let d = v_cols.cols().min(d_c - used);
        // Re-project against earlier syndromes to remove round-off leakage.
        let mut cols = v_cols.columns(0..d);
        for b in blocks.iter() {
            cols = &cols - &b.basis.matmul(&b.basis.adjoint().matmul(&cols));
        }
        let s = svd(&u.columns(0..d).matmul(&cols.adjoint()))?;
        let d = s.singular_values.iter().filter(|v| v.as_f64() > 1e-8).count();
        if d == 0 {
            break;
        }
        let basis = s.vdag.submatrix(0, 0, d, d_c).adjoint();
        let r = s.u.columns(0..d).matmul(&basis.adjoint());
        let contribution = data.kraus_fidelity(std::slice::from_ref(&r));
        if contribution.as_f64() < options.contribution_threshold {
            break;
        }
        deflator.remove(&basis);
        used += d;
        blocks.push(SyndromeBlock {
            basis,
            kraus: vec![r],
            contribution,
            eigenvalue: lam,
            dual: None,
        });
    }
    Ok(())
}

/// EigQER: repeatedly take the leading eigenvector of the deflated data
/// matrix, reshape it to `d_S × d_C`, keep its closest partial isometry and
/// remove that isometry's support from the code space.
pub fn eigqer<T: Real>(data: &DataMatrix<T>, options: &EigQerOptions) -> Result<StructuredRecovery<T>, StructuredError> {
    let mut deflator = Deflator::new(data);
    let mut blocks = Vec::new();
    extend_greedy(data, &mut deflator, &mut blocks, options)?;
    StructuredRecovery::assemble(data.d_s(), data.d_c(), RecoveryForm::Isometry, blocks)
}
