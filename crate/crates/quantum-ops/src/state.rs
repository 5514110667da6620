use qer_linalg::{hermitian_eigenvalues, Complex, Matrix, Real};

use crate::OpsError;

const STATE_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: Matrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self, OpsError> {
        if !matrix.is_square() {
            return Err(OpsError::InvalidState(format!("shape {:?}", matrix.shape())));
        }
        let herm = matrix.hermiticity_residual().as_f64();
        if herm > STATE_TOL {
            return Err(OpsError::InvalidState(format!("hermiticity residual {herm:e}")));
        }
        let tr = matrix.trace();
        if (tr.re.as_f64() - 1.0).abs() > STATE_TOL || tr.im.as_f64().abs() > STATE_TOL {
            return Err(OpsError::InvalidState(format!("trace {tr}")));
        }
        let matrix = matrix.hermitian_part();
        let min = hermitian_eigenvalues(&matrix)?.last().copied().unwrap_or_else(T::zero).as_f64();
        if min < -STATE_TOL {
            return Err(OpsError::InvalidState(format!("min eigenvalue {min:e}")));
        }
        Ok(Self { matrix })
    }

    /// I/d
    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: Matrix::identity(d).scale(T::one() / T::lit(d as f64)),
        }
    }

    /// |ψ⟩⟨ψ| for a normalized copy of ψ.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self, OpsError> {
        let n = qer_linalg::vec_norm(psi);
        if n <= T::zero() {
            return Err(OpsError::InvalidState("zero vector".into()));
        }
        let v: Vec<_> = psi.iter().map(|z| z / n).collect();
        Ok(Self {
            matrix: Matrix::outer(&v, &v),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn purity(&self) -> T {
        self.matrix.trace_product(&self.matrix).re
    }

    /// Whether the state has rank one within `tol`.
    pub fn is_pure(&self, tol: f64) -> bool {
        (self.purity().as_f64() - 1.0).abs() <= tol
    }
}

/// Probability-weighted list of states of equal dimension.
#[derive(Clone, Debug)]
pub struct Ensemble<T: Real> {
    states: Vec<DensityMatrix<T>>,
    probabilities: Vec<T>,
}

impl<T: Real> Ensemble<T> {
    pub fn new(states: Vec<DensityMatrix<T>>, probabilities: Vec<T>) -> Result<Self, OpsError> {
        if states.is_empty() || states.len() != probabilities.len() {
            return Err(OpsError::InvalidEnsemble(format!(
                "{} states, {} probabilities",
                states.len(),
                probabilities.len()
            )));
        }
        if probabilities.iter().any(|p| *p < T::zero()) {
            return Err(OpsError::InvalidEnsemble("negative probability".into()));
        }
        let total: f64 = probabilities.iter().map(|p| p.as_f64()).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(OpsError::InvalidEnsemble(format!("probabilities sum to {total}")));
        }
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return Err(OpsError::InvalidEnsemble("states differ in dimension".into()));
        }
        Ok(Self { states, probabilities })
    }

    pub fn single(state: DensityMatrix<T>) -> Self {
        Self {
            states: vec![state],
            probabilities: vec![T::one()],
        }
    }

    /// The default source: ρ = I/d with probability one.
    pub fn maximally_mixed(d: usize) -> Self {
        Self::single(DensityMatrix::maximally_mixed(d))
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> &[DensityMatrix<T>] {
        &self.states
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DensityMatrix<T>, T)> {
        self.states.iter().zip(self.probabilities.iter().copied())
    }

    /// Σ p_i ρ_i
    pub fn average_state(&self) -> DensityMatrix<T> {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for (s, p) in self.iter() {
            m.axpy(qer_linalg::cr(p), s.matrix());
        }
        DensityMatrix { matrix: m }
    }
}
