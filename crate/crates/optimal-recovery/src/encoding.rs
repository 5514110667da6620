use qer_linalg::{Complex, Matrix, Real};
use qer_ops::{composite_fidelity, data_matrix, Ensemble, QuantumChannel, RecoveryOperation};

use crate::certificate::kraus_from_choi;
use crate::{numerical_rank, recovery_from_choi, solve_sdp, OptimalError, SdpOptions, SdpProblem, SdpSolution};

/// Eigenvalues below this fraction of the largest are dropped when turning a
/// Choi matrix into Kraus operators.
const KRAUS_TOL: f64 = 1e-9;
const RANK_TOL: f64 = 1e-6;

/// `D = Σ_{k,i,j} p_k |E_j† R_i† ρ_k⟩⟩⟨⟨E_j† R_i† ρ_k|` on `d_C ⊗ d_S`, so that
/// an encoding with Choi matrix `X` reaches fidelity `tr(X D)`.
pub fn encoding_kernel<T: Real>(
    recovery: &[Matrix<T>],
    noise: &QuantumChannel<T>,
    ensemble: &Ensemble<T>,
) -> Result<Matrix<T>, OptimalError> {
    let d_s = ensemble.dim();
    let d_c = noise.d_in();
    if noise.d_out() != d_c {
        return Err(OptimalError::Dimension("noise must map the code space to itself".into()));
    }
    if let Some(r) = recovery.iter().find(|r| r.shape() != (d_s, d_c)) {
        return Err(OptimalError::Dimension(format!("recovery operator {:?} for {d_s} x {d_c}", r.shape())));
    }
    let mut columns: Vec<Vec<Complex<T>>> = Vec::with_capacity(ensemble.states().len() * recovery.len() * noise.num_kraus());
    for (rho, p) in ensemble.iter() {
        let sp = p.sqrt();
        for r in recovery {
            let rr = r.adjoint().matmul(rho.matrix());
            for e in noise.kraus() {
                columns.push(e.adjoint().matmul(&rr).scale(sp).into_data());
            }
        }
    }
    let b = Matrix::from_columns(d_c * d_s, &columns)?;
    Ok(b.matmul(&b.adjoint()).hermitian_part())
}

#[derive(Clone, Debug)]
pub struct OptimalEncoding<T: Real> {
    /// Encoding channel `d_S → d_C`.
    pub encoding: QuantumChannel<T>,
    pub solution: SdpSolution<T>,
    /// Fidelity of `R ∘ E ∘ encoding`, recomputed from the Kraus operators.
    pub value: T,
    /// Numerical rank of the encoding Choi matrix; `1` for an isometry.
    pub rank: usize,
}

/// Runs the SDP; a stalled solve still yields its best iterate.
fn solve_or_best<T: Real>(problem: &SdpProblem<T>) -> Result<SdpSolution<T>, OptimalError> {
    match solve_sdp(problem, SdpOptions::default()) {
        Err(OptimalError::NoConvergence { best, .. }) => Ok(best.cast()),
        other => other,
    }
}

/// Best encoding `d_S → d_C` for a fixed recovery and noise channel.
pub fn solve_optimal_encoding<T: Real>(
    recovery: &RecoveryOperation<T>,
    noise: &QuantumChannel<T>,
    ensemble: &Ensemble<T>,
) -> Result<OptimalEncoding<T>, OptimalError> {
    let d_s = ensemble.dim();
    let d_c = noise.d_in();
    let kernel = encoding_kernel(recovery.kraus(), noise, ensemble)?;
    let solution = solve_or_best(&SdpProblem::new(kernel, d_c, d_s)?)?;
    let rank = numerical_rank(&solution.x, RANK_TOL)?;
    let encoding = QuantumChannel::from_kraus_unchecked(kraus_from_choi(&solution.x, d_c, d_s, KRAUS_TOL)?)?;
    let value = composite_fidelity(ensemble, recovery.kraus(), &encoding.then(noise)?)?;
    Ok(OptimalEncoding {
        encoding,
        solution,
        value,
        rank,
    })
}

#[derive(Clone, Debug)]
pub struct EncodingIteration<T: Real> {
    pub encoding: QuantumChannel<T>,
    pub recovery: RecoveryOperation<T>,
    /// Fidelity after each half-step, recovery first.
    pub trace: Vec<f64>,
}

impl<T: Real> EncodingIteration<T> {
    pub fn value(&self) -> f64 {
        self.trace.last().copied().unwrap_or(0.0)
    }

    /// Successive differences of the trace.
    pub fn increments(&self) -> Vec<f64> {
        self.trace.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Alternates optimal recovery and optimal encoding from an isometric
/// starting encoding until a full round gains less than `tol`. A half-step
/// that would lower the fidelity keeps the previous operators.
pub fn iterate_encoding_recovery<T: Real>(
    initial: &Matrix<T>,
    noise: &QuantumChannel<T>,
    ensemble: &Ensemble<T>,
    max_rounds: usize,
    tol: f64,
) -> Result<EncodingIteration<T>, OptimalError> {
    let d_s = ensemble.dim();
    let d_c = noise.d_in();
    if initial.shape() != (d_c, d_s) {
        return Err(OptimalError::Dimension(format!("initial encoding {:?} for {d_s} -> {d_c}", initial.shape())));
    }
    let mut encoding = QuantumChannel::isometry(initial.clone())?;
    let mut recovery: Option<RecoveryOperation<T>> = None;
    let mut trace: Vec<f64> = Vec::new();
    for _ in 0..max_rounds.max(1) {
        let start = trace.last().copied();

        let channel = encoding.then(noise)?;
        let data = data_matrix(ensemble, &channel)?;
        let sol = solve_or_best(&SdpProblem::recovery(&data)?)?;
        let candidate = recovery_from_choi(&sol.x, d_s, d_c, KRAUS_TOL)?;
        let value = composite_fidelity(ensemble, candidate.kraus(), &channel)?.as_f64();
        match trace.last() {
            Some(&prev) if value < prev => trace.push(prev),
            _ => {
                recovery = Some(candidate);
                trace.push(value);
            }
        }
        let current = recovery.as_ref().expect("set on the first round");

        let enc = solve_optimal_encoding(current, noise, ensemble)?;
        let value = enc.value.as_f64();
        let prev = *trace.last().expect("pushed above");
        if value < prev {
            trace.push(prev);
        } else {
            encoding = enc.encoding;
            trace.push(value);
        }

        if let Some(start) = start {
            if trace.last().expect("non-empty") - start < tol {
                break;
            }
        }
    }
    Ok(EncodingIteration {
        encoding,
        recovery: recovery.expect("at least one round"),
        trace,
    })
}
