use qer_linalg::{Matrix, Real};

use crate::{encoding_isometry, PauliOperator, StabilizerCode, StabilizerError};

/// Orthogonal decomposition `Σ_q P_q = I` of the code space `H_C`, stored as
/// orthonormal bases `V_q` with `P_q = V_q V_q†`.
#[derive(Clone, Debug)]
pub struct SyndromePartition<T: Real> {
    dim: usize,
    bases: Vec<Matrix<T>>,
    labels: Vec<String>,
}

impl<T: Real> SyndromePartition<T> {
    /// Checks that every basis has orthonormal columns and that the blocks
    /// are mutually orthogonal and complete within `1e-9` (widened for `f32`).
    pub fn new(bases: Vec<Matrix<T>>, labels: Vec<String>) -> Result<Self, StabilizerError> {
        let dim = bases
            .first()
            .map(Matrix::rows)
            .ok_or_else(|| StabilizerError::Invalid("empty partition".into()))?;
        if labels.len() != bases.len() || bases.iter().any(|b| b.rows() != dim) {
            return Err(StabilizerError::Invalid("inconsistent partition blocks".into()));
        }
        let p = Self { dim, bases, labels };
        let total: usize = p.bases.iter().map(Matrix::cols).sum();
        if total != dim {
            return Err(StabilizerError::Invalid(format!("blocks span {total} of {dim} dimensions")));
        }
        let all = Matrix::from_fn(dim, dim, |i, j| {
            let mut c = j;
            for b in &p.bases {
                if c < b.cols() {
                    return b[(i, c)];
                }
                c -= b.cols();
            }
            unreachable!()
        });
        let residual = all.adjoint().matmul(&all).distance(&Matrix::identity(dim)).as_f64();
        if residual > 1e-9f64.max(64.0 * T::EPS * dim as f64) {
            return Err(StabilizerError::Invalid(format!("partition is not orthonormal ({residual:e})")));
        }
        Ok(p)
    }

    pub(crate) fn new_unchecked(dim: usize, bases: Vec<Matrix<T>>, labels: Vec<String>) -> Self {
        Self { dim, bases, labels }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn basis(&self, q: usize) -> &Matrix<T> {
        &self.bases[q]
    }

    pub fn bases(&self) -> &[Matrix<T>] {
        &self.bases
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self, q: usize) -> usize {
        self.bases[q].cols()
    }

    /// Dense `P_q`.
    pub fn projector(&self, q: usize) -> Matrix<T> {
        let v = &self.bases[q];
        v.matmul(&v.adjoint())
    }
}

/// Minimum-weight Pauli for each syndrome index, ties broken on
/// `(weight, x_bits, z_bits)`.
pub fn min_weight_representatives(code: &StabilizerCode) -> Vec<PauliOperator> {
    let count = code.num_syndromes();
    let mut reps: Vec<Option<PauliOperator>> = vec![None; count];
    reps[0] = Some(PauliOperator::identity(code.n()));
    let mut found = 1;
    for w in 1..=code.n() {
        if found == count {
            break;
        }
        for p in PauliOperator::all_of_weight(code.n(), w) {
            let q = code.syndrome_index(&p);
            if reps[q].is_none() {
                reps[q] = Some(p);
                found += 1;
            }
        }
    }
    reps.into_iter().map(|r| r.expect("every syndrome is reachable")).collect()
}

pub fn syndrome_label(bits: usize, len: usize) -> String {
    (0..len).map(|i| if bits >> (len - 1 - i) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Bit vector of `e`'s syndrome; bit `i` is set iff `e` anticommutes with `g_i`.
pub fn pauli_syndrome(code: &StabilizerCode, e: &PauliOperator) -> Vec<bool> {
    code.syndrome(e)
}

/// Syndrome subspaces `P_q = Π_i (I + (−1)^{b_i} g_i)/2`, each spanned by `B_q U_C`.
pub fn syndrome_partition<T: Real>(code: &StabilizerCode) -> Result<SyndromePartition<T>, StabilizerError> {
    let u = encoding_isometry::<T>(code)?;
    let reps = min_weight_representatives(code);
    Ok(partition_from_representatives(code, &u, &reps))
}

pub(crate) fn partition_from_representatives<T: Real>(
    code: &StabilizerCode,
    u: &Matrix<T>,
    reps: &[PauliOperator],
) -> SyndromePartition<T> {
    let r = code.generators().len();
    let bases = reps.iter().map(|b| b.apply(u)).collect();
    let labels = (0..reps.len()).map(|q| syndrome_label(q, r)).collect();
    SyndromePartition::new_unchecked(code.d_c(), bases, labels)
}
