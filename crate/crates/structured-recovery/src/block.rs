use qer_linalg::{orthonormal_span, Complex, Real};
use qer_ops::DataMatrix;

use crate::deflation::Deflator;
use crate::eigqer::{support, EXHAUSTED};
use crate::{reduced_sdp, EigQerOptions, RecoveryForm, StructuredError, StructuredRecovery, SyndromeBlock};

/// BlockEigQER: the supports of the `m` leading eigenvectors of the deflated
/// data matrix form one syndrome subspace, on which the recovery is the
/// subspace SDP optimum.
pub fn block_eigqer<T: Real>(
    data: &DataMatrix<T>,
    m: usize,
    options: &EigQerOptions,
) -> Result<StructuredRecovery<T>, StructuredError> {
    if m == 0 {
        return Err(StructuredError::Invalid("block size must be at least 1".into()));
    }
    let (d_s, d_c) = (data.d_s(), data.d_c());
    let mut deflator = Deflator::new(data);
    let mut blocks: Vec<SyndromeBlock<T>> = Vec::new();
    let mut used = 0;
    let mut floor = None;
    while used < d_c {
        let top = deflator.top(m, floor.unwrap_or(0.0))?;
        let Some(&(lam, _)) = top.first() else { break };
        let floor_val = *floor.get_or_insert(EXHAUSTED * lam.as_f64());
        let mut vectors: Vec<Vec<Complex<T>>> = Vec::new();
        for (l, v) in &top {
            if l.as_f64() <= floor_val {
                break;
            }
            let (_, cols) = support(v, d_s, d_c, options.rank_threshold)?;
            let mut cols = cols;
            for b in &blocks {
                cols = &cols - &b.basis.matmul(&b.basis.adjoint().matmul(&cols));
            }
            vectors.extend((0..cols.cols()).map(|j| cols.column(j)));
        }
        if vectors.is_empty() {
            break;
        }
        let basis = orthonormal_span(&vectors, 1e-8)?;
        if basis.cols() == 0 {
            break;
        }
        let sol = reduced_sdp(data, &basis, options.sdp_tol)?;
        if sol.value.as_f64() < options.contribution_threshold {
            break;
        }
        deflator.remove(&basis);
        used += basis.cols();
        blocks.push(SyndromeBlock {
            basis,
            kraus: sol.kraus,
            contribution: sol.value,
            eigenvalue: lam,
            dual: Some(sol.dual),
        });
    }
    StructuredRecovery::assemble(d_s, d_c, RecoveryForm::Subspace, blocks)
}
