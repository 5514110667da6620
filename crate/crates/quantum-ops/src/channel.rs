use qer_linalg::{cr, hermitian_eig, partial_trace, vectorize, Factor, Matrix, Real, VectorizedOperator};

use crate::{DensityMatrix, OpsError};

/// Tolerance on `‖Σ A_k†A_k − I‖_F` for a channel to count as trace preserving.
pub const CPTP_TOL: f64 = 1e-8;
/// Eigenvalues of a Choi matrix above `-PSD_TOL` are treated as zero or positive.
pub const PSD_TOL: f64 = 1e-8;

/// [`CPTP_TOL`] widened to the precision of `T` and the channel dimension.
pub fn cptp_tolerance<T: Real>(d: usize) -> f64 {
    CPTP_TOL.max(T::EPS * 64.0 * d as f64)
}

/// Kraus-form operation from `d_in` to `d_out`.
#[derive(Clone, Debug)]
pub struct QuantumChannel<T: Real> {
    d_in: usize,
    d_out: usize,
    kraus: Vec<Matrix<T>>,
}

impl<T: Real> QuantumChannel<T> {
    /// Builds a CPTP channel, rejecting operator lists with `‖Σ A†A − I‖_F` above [`cptp_tolerance`].
    pub fn new(kraus: Vec<Matrix<T>>) -> Result<Self, OpsError> {
        let ch = Self::from_kraus_unchecked(kraus)?;
        let residual = ch.cptp_residual().as_f64();
        if residual > cptp_tolerance::<T>(ch.d_in) {
            return Err(OpsError::NotTracePreserving { residual });
        }
        Ok(ch)
    }

    /// Builds a channel checking only shapes. Used for trace-decreasing
    /// operations such as truncated recoveries.
    pub fn from_kraus_unchecked(kraus: Vec<Matrix<T>>) -> Result<Self, OpsError> {
        let first = kraus
            .first()
            .ok_or_else(|| OpsError::Dimension("empty Kraus list".into()))?;
        let (d_out, d_in) = first.shape();
        if let Some(bad) = kraus.iter().find(|k| k.shape() != (d_out, d_in)) {
            return Err(OpsError::Dimension(format!(
                "Kraus operator {:?} differs from {:?}",
                bad.shape(),
                (d_out, d_in)
            )));
        }
        Ok(Self { d_in, d_out, kraus })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            d_in: d,
            d_out: d,
            kraus: vec![Matrix::identity(d)],
        }
    }

    /// Single-operator channel `ρ ↦ VρV†`.
    pub fn isometry(v: Matrix<T>) -> Result<Self, OpsError> {
        Self::new(vec![v])
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[Matrix<T>] {
        &self.kraus
    }

    pub fn into_kraus(self) -> Vec<Matrix<T>> {
        self.kraus
    }

    pub fn num_kraus(&self) -> usize {
        self.kraus.len()
    }

    /// Σ A_k†A_k
    pub fn completeness(&self) -> Matrix<T> {
        let mut s = Matrix::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            s = s + k.adjoint().matmul(k);
        }
        s
    }

    /// ‖Σ A_k†A_k − I‖_F
    pub fn cptp_residual(&self) -> T {
        self.completeness().distance(&Matrix::identity(self.d_in))
    }

    pub fn is_cptp(&self, tol: f64) -> bool {
        self.cptp_residual().as_f64() <= tol
    }

    /// Σ A_k ρ A_k† for an arbitrary `d_in × d_in` operator.
    pub fn apply_operator(&self, rho: &Matrix<T>) -> Result<Matrix<T>, OpsError> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(OpsError::Dimension(format!(
                "input {:?}, channel expects {}",
                rho.shape(),
                self.d_in
            )));
        }
        let mut out = Matrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out = out + k.matmul(rho).matmul(&k.adjoint());
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>, OpsError> {
        let out = self.apply_operator(rho.matrix())?;
        DensityMatrix::new(out)
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &Self) -> Result<Self, OpsError> {
        if other.d_in != self.d_out {
            return Err(OpsError::Dimension(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.d_in, self.d_out, other.d_in, other.d_out
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for b in &other.kraus {
            for a in &self.kraus {
                kraus.push(b.matmul(a));
            }
        }
        Ok(Self {
            d_in: self.d_in,
            d_out: other.d_out,
            kraus,
        })
    }

    /// `self ⊗ other` with `self` on the leading factor.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(a.kron(b));
            }
        }
        Self {
            d_in: self.d_in * other.d_in,
            d_out: self.d_out * other.d_out,
            kraus,
        }
    }

    pub fn choi(&self) -> ChoiMatrix<T> {
        kraus_to_choi(self)
    }

    /// Adjoint map `σ ↦ Σ A_k†σA_k`, itself expressed as a Kraus list.
    pub fn adjoint_map(&self) -> Self {
        Self {
            d_in: self.d_out,
            d_out: self.d_in,
            kraus: self.kraus.iter().map(Matrix::adjoint).collect(),
        }
    }

    pub fn cast<U: Real>(&self) -> QuantumChannel<U> {
        QuantumChannel {
            d_in: self.d_in,
            d_out: self.d_out,
            kraus: self.kraus.iter().map(Matrix::cast).collect(),
        }
    }
}

/// Choi matrix `X = Σ_k |A_k⟩⟩⟨⟨A_k|` on `d_out ⊗ d_in`.
#[derive(Clone, Debug)]
pub struct ChoiMatrix<T: Real> {
    d_in: usize,
    d_out: usize,
    matrix: Matrix<T>,
}

impl<T: Real> ChoiMatrix<T> {
    pub fn new(matrix: Matrix<T>, d_out: usize, d_in: usize) -> Result<Self, OpsError> {
        if matrix.shape() != (d_out * d_in, d_out * d_in) {
            return Err(OpsError::Dimension(format!(
                "Choi matrix {:?} for {} -> {}",
                matrix.shape(),
                d_in,
                d_out
            )));
        }
        Ok(Self { d_in, d_out, matrix })
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    /// tr_out X, which equals `I_{d_in}` exactly when the map is trace preserving.
    pub fn trace_out(&self) -> Matrix<T> {
        partial_trace(&self.matrix, self.d_out, self.d_in, Factor::First).expect("shape checked on construction")
    }

    pub fn trace_preservation_residual(&self) -> T {
        self.trace_out().distance(&Matrix::identity(self.d_in))
    }
}

pub fn kraus_to_choi<T: Real>(channel: &QuantumChannel<T>) -> ChoiMatrix<T> {
    let n = channel.d_in * channel.d_out;
    let mut x = Matrix::zeros(n, n);
    for k in channel.kraus() {
        let v = vectorize(k);
        x.axpy(cr(T::one()), &Matrix::outer(&v.amplitudes, &v.amplitudes));
    }
    ChoiMatrix {
        d_in: channel.d_in,
        d_out: channel.d_out,
        matrix: x,
    }
}

/// Kraus operators `√λ_k · devec(v_k)` from the eigenpairs of a Choi matrix,
/// keeping eigenvalues above `keep_tol`. Eigenvalues below `-PSD_TOL` are an
/// error. The result is trace-checked only if the Choi matrix was.
pub fn choi_to_kraus<T: Real>(choi: &ChoiMatrix<T>, keep_tol: f64) -> Result<QuantumChannel<T>, OpsError> {
    let eig = hermitian_eig(&choi.matrix)?;
    let min = eig.eigenvalues.last().copied().unwrap_or_else(T::zero).as_f64();
    if min < -PSD_TOL {
        return Err(OpsError::NotPositive { min_eigenvalue: min });
    }
    let mut kraus = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.as_f64() <= keep_tol {
            break;
        }
        let s = lambda.sqrt();
        let amps = eig.vector(k).into_iter().map(|z| z * s).collect();
        let v = VectorizedOperator::new(choi.d_out, choi.d_in, amps)?;
        kraus.push(v.devectorize());
    }
    if kraus.is_empty() {
        kraus.push(Matrix::zeros(choi.d_out, choi.d_in));
    }
    Ok(QuantumChannel {
        d_in: choi.d_in,
        d_out: choi.d_out,
        kraus,
    })
}
