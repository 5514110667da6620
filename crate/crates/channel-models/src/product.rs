use qer_linalg::{Matrix, Real};
use qer_ops::QuantumChannel;

use crate::ChannelError;

/// Largest qubit count for which a dense n-fold channel is built.
pub const MAX_DENSE_QUBITS: usize = 12;
/// Cap on the total number of complex entries across all dense Kraus operators.
const DENSE_ENTRY_BUDGET: usize = 1 << 26;

/// Applies a single-qubit operator to `qubit` (0-based, 0 = leftmost) of an
/// `n`-qubit register, acting on the rows of `m`.
pub fn apply_on_qubit<T: Real>(op: &Matrix<T>, qubit: usize, n: usize, m: &Matrix<T>) -> Matrix<T> {
    assert_eq!(op.shape(), (2, 2), "single-qubit operator expected");
    assert_eq!(m.rows(), 1 << n, "row count must be 2^n");
    assert!(qubit < n, "qubit index out of range");
    let bit = 1usize << (n - 1 - qubit);
    let cols = m.cols();
    let mut out = Matrix::zeros(m.rows(), cols);
    for r in 0..m.rows() {
        if r & bit != 0 {
            continue;
        }
        let r1 = r | bit;
        for j in 0..cols {
            let x0 = m[(r, j)];
            let x1 = m[(r1, j)];
            out[(r, j)] = op[(0, 0)] * x0 + op[(0, 1)] * x1;
            out[(r1, j)] = op[(1, 0)] * x0 + op[(1, 1)] * x1;
        }
    }
    out
}

/// Independent single-qubit channels, one per qubit, kept in factored form.
#[derive(Clone, Debug)]
pub struct ProductChannel<T: Real> {
    factors: Vec<QuantumChannel<T>>,
}

impl<T: Real> ProductChannel<T> {
    pub fn new(factors: Vec<QuantumChannel<T>>) -> Result<Self, ChannelError> {
        if factors.is_empty() {
            return Err(ChannelError::InvalidParameter("no qubits".into()));
        }
        if let Some(f) = factors.iter().find(|f| f.d_in() != 2 || f.d_out() != 2) {
            return Err(ChannelError::InvalidParameter(format!(
                "factor {} -> {} is not a qubit channel",
                f.d_in(),
                f.d_out()
            )));
        }
        Ok(Self { factors })
    }

    /// The same channel on each of `n` qubits.
    pub fn uniform(channel: &QuantumChannel<T>, n: usize) -> Result<Self, ChannelError> {
        if n == 0 {
            return Err(ChannelError::InvalidParameter("n must be at least 1".into()));
        }
        Self::new(vec![channel.clone(); n])
    }

    pub fn qubits(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[QuantumChannel<T>] {
        &self.factors
    }

    pub fn num_kraus(&self) -> usize {
        self.factors.iter().map(|f| f.num_kraus()).product()
    }

    /// Kraus operators `E_j V` of the channel applied after an isometry
    /// `V` (`2^n × d`), computed without forming any `2^n × 2^n` operator.
    pub fn after_isometry(&self, v: &Matrix<T>) -> Result<QuantumChannel<T>, ChannelError> {
        let n = self.qubits();
        if v.rows() != 1 << n {
            return Err(ChannelError::InvalidParameter(format!(
                "isometry has {} rows for {n} qubits",
                v.rows()
            )));
        }
        let mut ops = vec![v.clone()];
        for (q, f) in self.factors.iter().enumerate() {
            let mut next = Vec::with_capacity(ops.len() * f.num_kraus());
            for m in &ops {
                for e in f.kraus() {
                    next.push(apply_on_qubit(e, q, n, m));
                }
            }
            ops = next;
        }
        Ok(QuantumChannel::new(ops)?)
    }

    /// Dense `2^n`-dimensional channel, guarded by [`MAX_DENSE_QUBITS`] and a memory budget.
    pub fn dense(&self) -> Result<QuantumChannel<T>, ChannelError> {
        let n = self.qubits();
        let entries = (1usize << n).saturating_mul(1 << n).saturating_mul(self.num_kraus());
        if n > MAX_DENSE_QUBITS || entries > DENSE_ENTRY_BUDGET {
            return Err(ChannelError::TooLarge { qubits: n });
        }
        self.after_isometry(&Matrix::identity(1 << n))
    }

    /// Position of the Kraus product with the given per-qubit indices.
    pub fn kraus_index(&self, per_qubit: &[usize]) -> usize {
        per_qubit
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&i, f)| acc * f.num_kraus() + i)
    }
}

/// `ch^{⊗n}` as a dense channel with all `k^n` Kraus products.
pub fn n_fold<T: Real>(channel: &QuantumChannel<T>, n: usize) -> Result<QuantumChannel<T>, ChannelError> {
    ProductChannel::uniform(channel, n)?.dense()
}
