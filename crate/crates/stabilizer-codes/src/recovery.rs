use qer_linalg::{Complex, Matrix, Real};
use qer_ops::{QuantumChannel, RecoveryOperation};

use crate::syndrome::{min_weight_representatives, partition_from_representatives};
use crate::{encoding_isometry, PauliOperator, StabilizerCode, StabilizerError, SyndromePartition};

/// Syndrome recovery `R_q = U_C† B_q† P_q = (B_q U_C)†` with `B_q` the
/// minimum-weight Pauli of syndrome `q`.
pub fn generic_qec_recovery<T: Real>(code: &StabilizerCode) -> Result<RecoveryOperation<T>, StabilizerError> {
    let u = encoding_isometry::<T>(code)?;
    let reps = min_weight_representatives(code);
    let part = partition_from_representatives(code, &u, &reps);
    let kraus = part.bases().iter().map(Matrix::adjoint).collect();
    let labels = reps.iter().map(|p| p.to_string()).collect();
    Ok(RecoveryOperation::labelled(kraus, labels)?)
}

/// A Kraus operator written as `amplitude · P` with `P` phase-free.
#[derive(Clone, Copy, Debug)]
pub struct PauliTerm<T: Real> {
    pub pauli: PauliOperator,
    pub amplitude: Complex<T>,
}

/// Identifies every Kraus operator of an `n`-qubit channel as a scaled Pauli.
/// Zero operators are dropped.
pub fn pauli_decomposition<T: Real>(kraus: &[Matrix<T>]) -> Result<Vec<PauliTerm<T>>, StabilizerError> {
    let mut out = Vec::with_capacity(kraus.len());
    for (idx, k) in kraus.iter().enumerate() {
        let d = k.rows();
        if !k.is_square() || !d.is_power_of_two() || d < 2 {
            return Err(StabilizerError::NotPauli(idx));
        }
        let n = d.trailing_zeros() as usize;
        let scale = k.frobenius_norm();
        if scale.as_f64() < 1e-14 {
            continue;
        }
        let col0 = k.column(0);
        let (x, _) = col0
            .iter()
            .enumerate()
            .fold((0, T::zero()), |(bi, bv), (i, a)| if a.norm() > bv { (i, a.norm()) } else { (bi, bv) });
        let head = k[(x, 0)];
        if head.norm().as_f64() < 1e-12 * scale.as_f64() {
            return Err(StabilizerError::NotPauli(idx));
        }
        let mut z = 0u64;
        for q in 0..n {
            let b = 1usize << q;
            let ratio = k[(b ^ x, b)] / head;
            if ratio.re < T::zero() {
                z |= b as u64;
            }
        }
        let pauli = PauliOperator::new(n, x as u64, z, 0)?;
        let amplitude = head / pauli.coefficient::<T>(0);
        let mut residual = T::zero();
        for b in 0..d {
            for r in 0..d {
                let expect = if r == b ^ x {
                    amplitude * pauli.coefficient::<T>(b)
                } else {
                    Complex::new(T::zero(), T::zero())
                };
                residual = residual + (k[(r, b)] - expect).norm_sqr();
            }
        }
        if residual.sqrt().as_f64() > 1e-10 * scale.as_f64().max(1.0) {
            return Err(StabilizerError::NotPauli(idx));
        }
        out.push(PauliTerm { pauli, amplitude });
    }
    Ok(out)
}

/// Maximum-likelihood normalizer recovery for a Pauli channel.
#[derive(Clone, Debug)]
pub struct MlPauliRecovery<T: Real> {
    pub recovery: RecoveryOperation<T>,
    /// `weights[q][p]`: total probability of errors with syndrome `q` and logical class `p`.
    pub weights: Vec<Vec<T>>,
    /// Chosen logical class per syndrome.
    pub chosen: Vec<usize>,
    /// `B_q` per syndrome.
    pub representatives: Vec<PauliOperator>,
    pub partition: SyndromePartition<T>,
    /// `Σ_q max_p weights[q][p]`, the entanglement fidelity for `ρ = I/d_S`.
    pub fidelity: T,
}

impl<T: Real> MlPauliRecovery<T> {
    /// `|ã_q|²` per syndrome.
    pub fn best_weights(&self) -> Vec<T> {
        self.weights
            .iter()
            .zip(&self.chosen)
            .map(|(w, &p)| w[p])
            .collect()
    }
}

/// For each syndrome, applies the logical correction `A_p` of the most
/// probable error class: `R_q = U_C† A_p† B_q† P_q`.
pub fn ml_pauli_recovery<T: Real>(
    code: &StabilizerCode,
    channel: &QuantumChannel<T>,
) -> Result<MlPauliRecovery<T>, StabilizerError> {
    if channel.d_in() != code.d_c() {
        return Err(StabilizerError::Invalid(format!(
            "channel on {} dimensions for a {}-qubit code",
            channel.d_in(),
            code.n()
        )));
    }
    let terms = pauli_decomposition(channel.kraus())?;
    let u = encoding_isometry::<T>(code)?;
    let reps = min_weight_representatives(code);
    let classes = 1usize << (2 * code.k());
    let mut weights = vec![vec![T::zero(); classes]; code.num_syndromes()];
    for t in &terms {
        let q = code.syndrome_index(&t.pauli);
        let rel = reps[q].adjoint() * t.pauli;
        let p = code.logical_class(&rel);
        weights[q][p] = weights[q][p] + t.amplitude.norm_sqr();
    }
    let mut chosen = Vec::with_capacity(weights.len());
    let mut fidelity = T::zero();
    let mut kraus = Vec::with_capacity(weights.len());
    let mut labels = Vec::with_capacity(weights.len());
    let mut bases = Vec::with_capacity(weights.len());
    for (q, w) in weights.iter().enumerate() {
        let mut best = 0;
        for p in 1..classes {
            if w[p] > w[best] {
                best = p;
            }
        }
        chosen.push(best);
        fidelity = fidelity + w[best];
        let op = reps[q] * code.logical_operator(best);
        let v = op.apply(&u);
        kraus.push(v.adjoint());
        labels.push(op.unsigned().to_string());
        bases.push(v);
    }
    let labels_q = (0..weights.len())
        .map(|q| crate::syndrome::syndrome_label(q, code.generators().len()))
        .collect();
    Ok(MlPauliRecovery {
        recovery: RecoveryOperation::labelled(kraus, labels)?,
        weights,
        chosen,
        representatives: reps,
        partition: SyndromePartition::new_unchecked(code.d_c(), bases, labels_q),
        fidelity,
    })
}
