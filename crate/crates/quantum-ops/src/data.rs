use qer_linalg::{vectorize, Complex, Matrix, Real};

use crate::{Ensemble, OpsError, QuantumChannel};

/// C = Σ_{j,k} p_k |ρ_k E_j†⟩⟩⟨⟨ρ_k E_j†| on `d_S ⊗ d_C`.
///
/// `factor`, when present, is a matrix `B` with `C = B B†`; its columns are
/// `√p_k · vec(ρ_k E_j†)`.
#[derive(Clone, Debug)]
pub struct DataMatrix<T: Real> {
    d_s: usize,
    d_c: usize,
    matrix: Matrix<T>,
    factor: Option<Matrix<T>>,
}

impl<T: Real> DataMatrix<T> {
    /// Wraps an arbitrary Hermitian matrix on `d_s ⊗ d_c` (no factor).
    pub fn from_matrix(matrix: Matrix<T>, d_s: usize, d_c: usize) -> Result<Self, OpsError> {
        if matrix.shape() != (d_s * d_c, d_s * d_c) {
            return Err(OpsError::Dimension(format!(
                "data matrix {:?} for {d_s} x {d_c}",
                matrix.shape()
            )));
        }
        Ok(Self {
            d_s,
            d_c,
            matrix: matrix.hermitian_part(),
            factor: None,
        })
    }

    /// Builds `C = B B†` from a factor with `d_s · d_c` rows.
    pub fn from_factor(factor: Matrix<T>, d_s: usize, d_c: usize) -> Result<Self, OpsError> {
        if factor.rows() != d_s * d_c {
            return Err(OpsError::Dimension(format!(
                "factor with {} rows for {d_s} x {d_c}",
                factor.rows()
            )));
        }
        let matrix = factor.matmul(&factor.adjoint()).hermitian_part();
        Ok(Self {
            d_s,
            d_c,
            matrix,
            factor: Some(factor),
        })
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    pub fn d_c(&self) -> usize {
        self.d_c
    }

    pub fn dim(&self) -> usize {
        self.d_s * self.d_c
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn factor(&self) -> Option<&Matrix<T>> {
        self.factor.as_ref()
    }

    /// tr(X C) for a recovery Choi matrix `X`.
    pub fn fidelity(&self, choi: &Matrix<T>) -> T {
        choi.trace_product(&self.matrix).re
    }

    /// ⟨⟨R|C|R⟩⟩ summed over Kraus operators (`d_s × d_c`) of a recovery.
    pub fn kraus_fidelity(&self, recovery: &[Matrix<T>]) -> T {
        recovery
            .iter()
            .map(|r| self.matrix.quadratic_form(&vectorize(r).amplitudes).re)
            .fold(T::zero(), |s, x| s + x)
    }
}

/// Data matrix for recovering `channel` (Kraus operators `d_C × d_S`, the
/// channel already composed with the encoding) on the given source ensemble.
pub fn data_matrix<T: Real>(ensemble: &Ensemble<T>, channel: &QuantumChannel<T>) -> Result<DataMatrix<T>, OpsError> {
    let d_s = channel.d_in();
    let d_c = channel.d_out();
    if ensemble.dim() != d_s {
        return Err(OpsError::Dimension(format!(
            "ensemble of dimension {} for a channel from {d_s}",
            ensemble.dim()
        )));
    }
    let count = ensemble.states().len() * channel.num_kraus();
    let mut columns: Vec<Vec<Complex<T>>> = Vec::with_capacity(count);
    for (rho, p) in ensemble.iter() {
        let sp = p.sqrt();
        for e in channel.kraus() {
            let m = rho.matrix().matmul(&e.adjoint()).scale(sp);
            columns.push(m.into_data());
        }
    }
    let factor = Matrix::from_columns(d_s * d_c, &columns)?;
    DataMatrix::from_factor(factor, d_s, d_c)
}

/// Σ_k p_k Σ_{i,j} |tr(ρ_k R_i E_j)|², the average entanglement fidelity of
/// `R ∘ E` computed without forming the composition.
pub fn composite_fidelity<T: Real>(
    ensemble: &Ensemble<T>,
    recovery: &[Matrix<T>],
    channel: &QuantumChannel<T>,
) -> Result<T, OpsError> {
    let d_s = channel.d_in();
    let d_c = channel.d_out();
    if let Some(r) = recovery.iter().find(|r| r.shape() != (d_s, d_c)) {
        return Err(OpsError::Dimension(format!(
            "recovery operator {:?}, expected {:?}",
            r.shape(),
            (d_s, d_c)
        )));
    }
    let mut total = T::zero();
    for (rho, p) in ensemble.iter() {
        for e in channel.kraus() {
            let re = rho.matrix().matmul(&e.adjoint());
            for r in recovery {
                // ⟨⟨ρE†|R⟩⟩ = tr(ρ R E)
                let t = re
                    .data()
                    .iter()
                    .zip(r.data())
                    .fold(Complex::new(T::zero(), T::zero()), |s, (a, b)| s + a.conj() * b);
                total = total + p * t.norm_sqr();
            }
        }
    }
    Ok(total)
}
