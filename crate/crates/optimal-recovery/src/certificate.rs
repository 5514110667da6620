use qer_linalg::{identity_kron, min_eigenvalue, partial_trace, Factor, Matrix, Real};
use qer_ops::{data_matrix, DataMatrix, Ensemble, QuantumChannel, RecoveryOperation, CPTP_TOL};
use serde::Serialize;

use crate::OptimalError;

/// Tolerance below which a dual point counts as feasible.
pub const DUAL_FEASIBILITY_TOL: f64 = 1e-7;

/// Dual point `Y` with bound `tr Y` and feasibility residual
/// `−min(0, λ_min(I ⊗ Y − C))`.
#[derive(Clone, Debug)]
pub struct DualCertificate<T: Real> {
    pub y: Matrix<T>,
    pub bound: T,
    pub feasibility_residual: f64,
    /// `‖Y − Y†‖_F` of the point as supplied, before taking its Hermitian part.
    pub hermiticity_residual: f64,
}

impl<T: Real> DualCertificate<T> {
    pub fn new(y: Matrix<T>, data: &DataMatrix<T>) -> Result<Self, OptimalError> {
        if y.shape() != (data.d_c(), data.d_c()) {
            return Err(OptimalError::Dimension(format!("dual point {:?} for d_C = {}", y.shape(), data.d_c())));
        }
        let hermiticity_residual = y.hermiticity_residual().as_f64();
        let y = y.hermitian_part();
        let z = &identity_kron(data.d_s(), &y) - data.matrix();
        let lo = min_eigenvalue(&z.hermitian_part())?.as_f64();
        Ok(Self {
            bound: y.trace().re,
            y,
            feasibility_residual: (-lo).max(0.0),
            hermiticity_residual,
        })
    }

    pub fn is_valid(&self) -> bool {
        self.feasibility_residual <= DUAL_FEASIBILITY_TOL
    }

    /// `tr Y + d_C · residual`, the bound of `Y + residual · I`, valid even
    /// when `Y` is slightly infeasible.
    pub fn certified_bound(&self) -> f64 {
        self.bound.as_f64() + self.y.rows() as f64 * self.feasibility_residual
    }
}

/// `Y = tr_S(C X_R)` from a recovery. `tr Y` always equals the recovery's
/// fidelity; the certificate is feasible exactly when the recovery is optimal.
pub fn dual_from_primal<T: Real>(recovery: &RecoveryOperation<T>, data: &DataMatrix<T>) -> Result<DualCertificate<T>, OptimalError> {
    if recovery.d_s() != data.d_s() || recovery.d_c() != data.d_c() {
        return Err(OptimalError::Dimension("recovery and data matrix disagree".into()));
    }
    let y = partial_trace(&data.matrix().matmul(&recovery.choi()), data.d_s(), data.d_c(), Factor::First)?;
    DualCertificate::new(y, data)
}

/// [`dual_from_primal`] for an ensemble and an encoded channel.
pub fn dual_from_recovery<T: Real>(
    recovery: &RecoveryOperation<T>,
    ensemble: &Ensemble<T>,
    channel: &QuantumChannel<T>,
) -> Result<DualCertificate<T>, OptimalError> {
    dual_from_primal(recovery, &data_matrix(ensemble, channel)?)
}

/// Residuals of the optimality system for a primal-dual pair.
#[derive(Clone, Debug, Serialize)]
pub struct OptimalityReport {
    pub primal_value: f64,
    pub dual_value: f64,
    /// `|tr Y − tr XC|`
    pub duality_gap: f64,
    /// `‖(I ⊗ Y − C) X‖_F`
    pub slackness: f64,
    /// `max(‖tr_S X − I‖_F, −λ_min(X))`
    pub primal_infeasibility: f64,
    /// `−min(0, λ_min(I ⊗ Y − C))`
    pub dual_infeasibility: f64,
}

impl OptimalityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.duality_gap <= tol && self.slackness <= tol && self.primal_infeasibility <= tol && self.dual_infeasibility <= tol
    }
}

pub fn verify_optimality<T: Real>(x: &Matrix<T>, y: &Matrix<T>, data: &DataMatrix<T>) -> Result<OptimalityReport, OptimalError> {
    let (d_s, d_c) = (data.d_s(), data.d_c());
    let n = d_s * d_c;
    if x.shape() != (n, n) || y.shape() != (d_c, d_c) {
        return Err(OptimalError::Dimension("primal or dual point has the wrong shape".into()));
    }
    let z = (&identity_kron(d_s, y) - data.matrix()).hermitian_part();
    let tr_x = partial_trace(x, d_s, d_c, Factor::First)?;
    let primal_value = data.fidelity(x).as_f64();
    let dual_value = y.trace().re.as_f64();
    let x_lo = min_eigenvalue(&x.hermitian_part())?.as_f64();
    Ok(OptimalityReport {
        primal_value,
        dual_value,
        duality_gap: (dual_value - primal_value).abs(),
        slackness: z.matmul(x).frobenius_norm().as_f64(),
        primal_infeasibility: tr_x.distance(&Matrix::identity(d_c)).as_f64().max(-x_lo).max(0.0),
        dual_infeasibility: (-min_eigenvalue(&z)?.as_f64()).max(0.0),
    })
}

/// Spectral Kraus operators `√λ_k devec(v_k)` (`d_S × d_C`) of a feasible
/// recovery Choi matrix. Eigenvalues at or below `tol · λ_max` are dropped and
/// the result is renormalized to be exactly trace preserving.
pub fn recovery_from_choi<T: Real>(
    x: &Matrix<T>,
    d_s: usize,
    d_c: usize,
    tol: f64,
) -> Result<RecoveryOperation<T>, OptimalError> {
    let kraus = kraus_from_choi(x, d_s, d_c, tol)?;
    Ok(RecoveryOperation::with_tolerance(kraus, CPTP_TOL)?)
}

/// Trace-preserving Kraus list (`d_out × d_in`) of a Choi matrix on
/// `d_out ⊗ d_in` with `tr_out X = I` within `1e-6`.
pub fn kraus_from_choi<T: Real>(
    x: &Matrix<T>,
    d_out: usize,
    d_in: usize,
    tol: f64,
) -> Result<Vec<Matrix<T>>, OptimalError> {
    let n = d_out * d_in;
    if x.shape() != (n, n) {
        return Err(OptimalError::Dimension(format!("Choi matrix {:?} for {d_out} x {d_in}", x.shape())));
    }
    let tr_x = partial_trace(x, d_out, d_in, Factor::First)?;
    let residual = tr_x.distance(&Matrix::identity(d_in)).as_f64();
    if residual > 1e-6 {
        return Err(OptimalError::Infeasible(format!("partial trace deviates from I by {residual:e}")));
    }
    let eig = qer_linalg::hermitian_eig(&x.hermitian_part())?;
    let top = eig.eigenvalues.first().map_or(0.0, |v| v.as_f64());
    if eig.eigenvalues.last().map_or(0.0, |v| v.as_f64()) < -1e-6 * top.max(1.0) {
        return Err(OptimalError::Infeasible("Choi matrix is not positive semidefinite".into()));
    }
    let mut kraus = Vec::new();
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam.as_f64() <= tol * top {
            break;
        }
        kraus.push(Matrix::new(d_out, d_in, eig.vector(k))?.scale(lam.sqrt()));
    }
    let s = kraus
        .iter()
        .fold(Matrix::zeros(d_in, d_in), |acc, r| &acc + &r.adjoint().matmul(r));
    let fix = qer_linalg::inverse_hpd(&qer_linalg::psd_sqrt(&s)?)?;
    Ok(kraus.into_iter().map(|r| r.matmul(&fix)).collect())
}

/// Numerical rank: eigenvalues above `tol · λ_max`.
pub fn numerical_rank<T: Real>(x: &Matrix<T>, tol: f64) -> Result<usize, OptimalError> {
    let vals = qer_linalg::hermitian_eigenvalues(&x.hermitian_part())?;
    let top = vals.first().map_or(0.0, |v| v.as_f64());
    Ok(vals.iter().filter(|v| v.as_f64() > tol * top).count())
}
