use qer_linalg::{hermitian_eigenvalues, Matrix, Real};
use qer_ops::DataMatrix;
use qer_optimal::DualCertificate;
use qer_stabilizer::SyndromePartition;
use qer_structured::{lift_dual, reduce_kernel, StructuredRecovery};
use rayon::prelude::*;

use crate::partition::{partition_of, stacked};
use crate::{repair_kernel, DualError, RepairOptions};

/// Cost of one merge round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeRecord {
    /// Blocks entering the round.
    pub blocks: usize,
    /// Rank-one updates summed over the round.
    pub updates: usize,
    /// Largest `d_S · d_q` repaired in the round.
    pub largest: usize,
}

#[derive(Clone, Debug)]
pub struct BlockDual<T: Real> {
    pub certificate: DualCertificate<T>,
    /// Round 0 repairs the blocks one at a time; later rounds merge pairs.
    pub rounds: Vec<MergeRecord>,
    /// Updates in the closing full-space pass.
    pub final_updates: usize,
}

impl<T: Real> BlockDual<T> {
    pub fn total_updates(&self) -> usize {
        self.rounds.iter().map(|r| r.updates).sum::<usize>() + self.final_updates
    }
}

fn subspace_duals<T: Real>(
    data: &DataMatrix<T>,
    partition: &SyndromePartition<T>,
    duals: &[Option<Matrix<T>>],
) -> Result<Vec<Matrix<T>>, DualError> {
    if partition.dim() != data.d_c() {
        return Err(DualError::Dimension(format!("partition of dimension {} for d_C = {}", partition.dim(), data.d_c())));
    }
    if duals.len() != partition.len() {
        return Err(DualError::Dimension(format!("{} subspace duals for {} blocks", duals.len(), partition.len())));
    }
    partition
        .bases()
        .iter()
        .zip(duals)
        .map(|(v, y)| match y {
            Some(y) if y.shape() == (v.cols(), v.cols()) => Ok(y.hermitian_part()),
            Some(y) => Err(DualError::Dimension(format!("subspace dual {:?} for rank {}", y.shape(), v.cols()))),
            None => {
                let k = reduce_kernel(data.matrix(), v, data.d_s());
                let top = hermitian_eigenvalues(&k)?[0].max(T::zero());
                Ok(Matrix::identity(v.cols()).scale(top))
            }
        })
        .collect()
}

/// `Y₀ = Σ_q V̄_q Y_q V_qᵀ`. Blocks without a subspace dual get
/// `λ_max((C)_qq) · I`.
pub fn block_dual_init<T: Real>(
    data: &DataMatrix<T>,
    partition: &SyndromePartition<T>,
    duals: &[Option<Matrix<T>>],
) -> Result<Matrix<T>, DualError> {
    let ys = subspace_duals(data, partition, duals)?;
    let d = partition.dim();
    Ok(partition
        .bases()
        .iter()
        .zip(&ys)
        .fold(Matrix::zeros(d, d), |acc, (v, y)| &acc + &lift_dual(y, v)))
}

fn block_diag<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (m, n) = (a.rows(), b.rows());
    Matrix::from_fn(m + n, m + n, |i, j| match (i < m, j < m) {
        (true, true) => a[(i, j)],
        (false, false) => b[(i - m, j - m)],
        _ => Default::default(),
    })
}

fn repair_block<T: Real>(
    c: &Matrix<T>,
    d_s: usize,
    basis: &Matrix<T>,
    y: &Matrix<T>,
    options: &RepairOptions,
) -> Result<(Matrix<T>, usize), DualError> {
    let k = reduce_kernel(c, basis, d_s);
    let r = repair_kernel(y, &k, d_s, options)?;
    Ok((r.y, r.iterations))
}

/// Subspace duals and partition of a recovery whose blocks carry duals,
/// such as BlockEigQER output.
pub fn recovery_duals<T: Real>(
    recovery: &StructuredRecovery<T>,
) -> Result<(SyndromePartition<T>, Vec<Option<Matrix<T>>>), DualError> {
    let partition = partition_of(recovery)?;
    let mut duals: Vec<_> = recovery.blocks.iter().map(|b| b.dual.clone()).collect();
    duals.resize(partition.len(), None);
    Ok((partition, duals))
}

/// Repairs the block-diagonal start one block at a time, then over unions of
/// adjacent pairs until two blocks remain, and finishes with a pass on the
/// full space. Pairs within a round are repaired in parallel.
pub fn iterated_block_dual<T: Real>(
    data: &DataMatrix<T>,
    partition: &SyndromePartition<T>,
    duals: &[Option<Matrix<T>>],
    options: &RepairOptions,
) -> Result<BlockDual<T>, DualError> {
    let ys = subspace_duals(data, partition, duals)?;
    let (c, d_s) = (data.matrix(), data.d_s());
    let mut blocks: Vec<(Matrix<T>, Matrix<T>)> = partition.bases().iter().cloned().zip(ys).collect();
    let mut rounds = Vec::new();

    let repaired = blocks
        .par_iter()
        .map(|(v, y)| repair_block(c, d_s, v, y, options))
        .collect::<Result<Vec<_>, _>>()?;
    rounds.push(MergeRecord {
        blocks: blocks.len(),
        updates: repaired.iter().map(|r| r.1).sum(),
        largest: blocks.iter().map(|b| d_s * b.0.cols()).max().unwrap_or(0),
    });
    for (b, (y, _)) in blocks.iter_mut().zip(repaired) {
        b.1 = y;
    }

    while blocks.len() > 2 {
        let merged: Vec<(Matrix<T>, Matrix<T>)> = blocks
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => (stacked(&[a.0.clone(), b.0.clone()]), block_diag(&a.1, &b.1)),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
        let results = merged
            .par_iter()
            .enumerate()
            .map(|(i, (v, y))| {
                if 2 * i + 1 < blocks.len() {
                    repair_block(c, d_s, v, y, options)
                } else {
                    Ok((y.clone(), 0))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        rounds.push(MergeRecord {
            blocks: blocks.len(),
            updates: results.iter().map(|r| r.1).sum(),
            largest: merged.iter().map(|b| d_s * b.0.cols()).max().unwrap_or(0),
        });
        blocks = merged.into_iter().zip(results).map(|((v, _), (y, _))| (v, y)).collect();
    }

    let d = data.d_c();
    let y0 = blocks
        .iter()
        .fold(Matrix::zeros(d, d), |acc, (v, y)| &acc + &lift_dual(y, v));
    let last = repair_kernel(&y0, c, d_s, options)?;
    Ok(BlockDual {
        certificate: DualCertificate::new(last.y, data)?,
        rounds,
        final_updates: last.iterations,
    })
}
