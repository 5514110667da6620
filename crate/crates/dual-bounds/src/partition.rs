use qer_linalg::{hermitian_eigenvalues, spectral_norm, Matrix, Real};
use qer_ops::DataMatrix;
use qer_optimal::DualCertificate;
use qer_stabilizer::SyndromePartition;
use qer_structured::{reduce_kernel, StructuredRecovery};

use crate::DualError;

/// Dual point `Y = Σ_q w_q P̄_q` over a syndrome partition.
#[derive(Clone, Debug)]
pub struct PartitionedDual<T: Real> {
    pub weights: Vec<T>,
    pub certificate: DualCertificate<T>,
}

impl<T: Real> PartitionedDual<T> {
    pub fn bound(&self) -> f64 {
        self.certificate.bound.as_f64()
    }
}

/// `Σ_q w_q P̄_q = Σ_q w_q V̄_q V_qᵀ`.
pub fn weighted_dual<T: Real>(partition: &SyndromePartition<T>, weights: &[T]) -> Result<Matrix<T>, DualError> {
    if weights.len() != partition.len() {
        return Err(DualError::Dimension(format!("{} weights for {} blocks", weights.len(), partition.len())));
    }
    if weights.iter().any(|w| *w < T::zero()) {
        return Err(DualError::Invalid("negative partition weight".into()));
    }
    let d = partition.dim();
    Ok(partition.bases().iter().zip(weights).fold(Matrix::zeros(d, d), |acc, (v, &w)| {
        &acc + &v.conj().matmul(&v.transpose()).scale(w)
    }))
}

/// Syndrome partition of a structured recovery, residual block last.
pub fn partition_of<T: Real>(recovery: &StructuredRecovery<T>) -> Result<SyndromePartition<T>, DualError> {
    let bases = recovery.partition_bases();
    let mut labels: Vec<String> = (0..recovery.blocks.len()).map(|q| format!("block {q}")).collect();
    if bases.len() > labels.len() {
        labels.push("residual".into());
    }
    Ok(SyndromePartition::new(bases, labels)?)
}

/// All partition columns side by side, `d_C × d_C`.
pub(crate) fn stacked<T: Real>(bases: &[Matrix<T>]) -> Matrix<T> {
    let rows = bases.first().map_or(0, Matrix::rows);
    let cols = bases.iter().map(Matrix::cols).sum();
    let mut out = Matrix::zeros(rows, cols);
    let mut at = 0;
    for b in bases {
        for j in 0..b.cols() {
            out.set_column(at + j, &b.column(j));
        }
        at += b.cols();
    }
    out
}

/// Row indices of block `q` in the adapted basis, `s · d_C + c`.
fn block_rows(offset: usize, rank: usize, d_s: usize, d_c: usize) -> Vec<usize> {
    (0..d_s).flat_map(|s| (offset..offset + rank).map(move |c| s * d_c + c)).collect()
}

fn check<T: Real>(data: &DataMatrix<T>, partition: &SyndromePartition<T>) -> Result<(), DualError> {
    if partition.dim() != data.d_c() {
        return Err(DualError::Dimension(format!(
            "partition of dimension {} for d_C = {}",
            partition.dim(),
            data.d_c()
        )));
    }
    Ok(())
}

/// `C` in the basis adapted to the partition, with the block row sets.
fn adapted<T: Real>(data: &DataMatrix<T>, partition: &SyndromePartition<T>) -> (Matrix<T>, Vec<Vec<usize>>) {
    let (d_s, d_c) = (data.d_s(), data.d_c());
    let c = reduce_kernel(data.matrix(), &stacked(partition.bases()), d_s);
    let mut offset = 0;
    let rows = (0..partition.len())
        .map(|q| {
            let r = block_rows(offset, partition.rank(q), d_s, d_c);
            offset += partition.rank(q);
            r
        })
        .collect();
    (c, rows)
}

fn certify<T: Real>(
    data: &DataMatrix<T>,
    partition: &SyndromePartition<T>,
    weights: Vec<T>,
) -> Result<PartitionedDual<T>, DualError> {
    let y = weighted_dual(partition, &weights)?;
    Ok(PartitionedDual {
        certificate: DualCertificate::new(y, data)?,
        weights,
    })
}

/// Weights from Gersgorin discs in the adapted basis: `w_q` is the largest
/// absolute row sum over the rows of block `q`. Always feasible.
pub fn gersgorin_bound<T: Real>(data: &DataMatrix<T>, partition: &SyndromePartition<T>) -> Result<PartitionedDual<T>, DualError> {
    check(data, partition)?;
    let (c, rows) = adapted(data, partition);
    let weights = rows
        .iter()
        .map(|block| {
            block
                .iter()
                .map(|&i| c.row(i).iter().fold(T::zero(), |acc, z| acc + z.norm()))
                .fold(T::zero(), T::max)
        })
        .collect();
    certify(data, partition, weights)
}

/// Weights `w_q = σ_max((I ⊗ P̄_q) C)`. Not feasible in general.
pub fn svd_dual_point<T: Real>(data: &DataMatrix<T>, partition: &SyndromePartition<T>) -> Result<PartitionedDual<T>, DualError> {
    check(data, partition)?;
    let (c, rows) = adapted(data, partition);
    let n = c.cols();
    let weights = rows
        .iter()
        .map(|block| spectral_norm(&Matrix::from_fn(block.len(), n, |i, j| c[(block[i], j)])))
        .collect::<Result<Vec<_>, _>>()?;
    certify(data, partition, weights)
}

/// Weights `w_q = λ_max((C)_qq)`, feasible on each diagonal block only.
pub fn lambda_max_init<T: Real>(data: &DataMatrix<T>, partition: &SyndromePartition<T>) -> Result<PartitionedDual<T>, DualError> {
    check(data, partition)?;
    let (c, rows) = adapted(data, partition);
    let weights = rows
        .iter()
        .map(|block| {
            let sub = Matrix::from_fn(block.len(), block.len(), |i, j| c[(block[i], block[j])]);
            hermitian_eigenvalues(&sub).map(|v| v[0].max(T::zero()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    certify(data, partition, weights)
}
