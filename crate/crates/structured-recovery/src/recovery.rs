use qer_linalg::{Complex, Matrix, Real};
use qer_ops::{DataMatrix, RecoveryOperation, CPTP_TOL};
use serde::{Deserialize, Serialize};

use crate::subspace::complement_basis;
use crate::StructuredError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RecoveryForm {
    /// One partial isometry `R_q` per syndrome, `R_q R_q† = I_{d_q}`.
    Isometry,
    /// A CPTP map from each syndrome subspace, possibly with several Kraus operators.
    Subspace,
}

/// A syndrome subspace and the operator elements acting on it.
#[derive(Clone, Debug)]
pub struct SyndromeBlock<T: Real> {
    /// Orthonormal columns spanning the syndrome subspace of `H_C`.
    pub basis: Matrix<T>,
    /// Operator elements `d_S × d_C`, each satisfying `R = R B B†`.
    pub kraus: Vec<Matrix<T>>,
    /// `Σ_k ⟨⟨R_k|C|R_k⟩⟩`
    pub contribution: T,
    /// Leading eigenvalue of the deflated data matrix when the block was chosen.
    pub eigenvalue: T,
    /// Optimal subspace dual `Y_q` in the coordinates of `basis`, when the
    /// block came from a subspace SDP.
    pub dual: Option<Matrix<T>>,
}

impl<T: Real> SyndromeBlock<T> {
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn projector(&self) -> Matrix<T> {
        self.basis.matmul(&self.basis.adjoint())
    }
}

#[derive(Clone, Debug)]
pub struct StructuredRecovery<T: Real> {
    pub d_s: usize,
    pub d_c: usize,
    pub form: RecoveryForm,
    /// Blocks in extraction order.
    pub blocks: Vec<SyndromeBlock<T>>,
    /// Basis of the code space left unassigned; empty when the blocks are complete.
    pub residual: Matrix<T>,
}

impl<T: Real> StructuredRecovery<T> {
    pub(crate) fn assemble(d_s: usize, d_c: usize, form: RecoveryForm, blocks: Vec<SyndromeBlock<T>>) -> Result<Self, StructuredError> {
        let bases: Vec<Matrix<T>> = blocks.iter().map(|b| b.basis.clone()).collect();
        let used: usize = bases.iter().map(Matrix::cols).sum();
        let residual = if used == d_c {
            Matrix::zeros(d_c, 0)
        } else {
            complement_basis(&bases, d_c)?
        };
        Ok(Self {
            d_s,
            d_c,
            form,
            blocks,
            residual,
        })
    }

    pub fn is_complete(&self) -> bool {
        self.residual.cols() == 0
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.blocks.iter().map(SyndromeBlock::rank).collect()
    }

    /// Contributions in extraction order.
    pub fn contributions(&self) -> Vec<T> {
        self.blocks.iter().map(|b| b.contribution).collect()
    }

    /// Contributions sorted by decreasing gain.
    pub fn sorted_contributions(&self) -> Vec<T> {
        let mut c = self.contributions();
        c.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        c
    }

    /// Recorded operator elements.
    pub fn kraus(&self) -> Vec<Matrix<T>> {
        self.blocks.iter().flat_map(|b| b.kraus.iter().cloned()).collect()
    }

    pub fn num_operators(&self) -> usize {
        self.blocks.iter().map(|b| b.kraus.len()).sum()
    }

    /// Fidelity from the recorded elements only.
    pub fn fidelity(&self, data: &DataMatrix<T>) -> T {
        data.kraus_fidelity(&self.kraus())
    }

    /// Fidelity of the `count` best blocks.
    pub fn truncated_fidelity(&self, data: &DataMatrix<T>, count: usize) -> T {
        let mut order: Vec<usize> = (0..self.blocks.len()).collect();
        order.sort_by(|&a, &b| {
            self.blocks[b]
                .contribution
                .partial_cmp(&self.blocks[a].contribution)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let kraus: Vec<Matrix<T>> = order
            .into_iter()
            .take(count)
            .flat_map(|q| self.blocks[q].kraus.iter().cloned())
            .collect();
        data.kraus_fidelity(&kraus)
    }

    /// Syndrome bases followed by the residual basis when it is non-empty.
    pub fn partition_bases(&self) -> Vec<Matrix<T>> {
        let mut out: Vec<Matrix<T>> = self.blocks.iter().map(|b| b.basis.clone()).collect();
        if !self.is_complete() {
            out.push(self.residual.clone());
        }
        out
    }

    /// The recorded elements plus a partial isometry on the residual space,
    /// giving a CPTP map.
    pub fn completed(&self) -> Result<RecoveryOperation<T>, StructuredError> {
        let mut kraus = self.kraus();
        let r = self.residual.cols();
        let mut start = 0;
        while start < r {
            let len = self.d_s.min(r - start);
            let chunk = self.residual.columns(start..start + len);
            let w = Matrix::from_fn(self.d_s, len, |i, j| {
                if i == j {
                    Complex::new(T::one(), T::zero())
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            });
            kraus.push(w.matmul(&chunk.adjoint()));
            start += len;
        }
        Ok(RecoveryOperation::with_tolerance(kraus, CPTP_TOL)?)
    }
}
