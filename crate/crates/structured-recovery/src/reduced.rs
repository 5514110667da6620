use qer_linalg::{Matrix, Real};
use qer_ops::DataMatrix;
use qer_optimal::{kraus_from_choi, solve_sdp, OptimalError, SdpOptions, SdpProblem, SdpSolution};

use crate::subspace::{lift_dual, reduce_kernel};
use crate::StructuredError;

/// Optimal recovery restricted to a subspace of the code space.
#[derive(Clone, Debug)]
pub struct ReducedSolution<T: Real> {
    pub basis: Matrix<T>,
    /// Operator elements on the full code space, `d_S × d_C`.
    pub kraus: Vec<Matrix<T>>,
    /// `Σ ⟨⟨R_k|C|R_k⟩⟩` over `kraus`.
    pub value: T,
    /// Subspace dual `Y_q` on `d_q × d_q`.
    pub dual: Matrix<T>,
    pub solution: SdpSolution<T>,
}

impl<T: Real> ReducedSolution<T> {
    /// Real optimization variables of the subspace SDP, `(d_S d_q)²`.
    pub fn variables(&self) -> usize {
        let n = self.solution.d_out * self.solution.d_in;
        n * n
    }

    /// `Y_q` on the full dual-code space.
    pub fn lifted_dual(&self) -> Matrix<T> {
        lift_dual(&self.dual, &self.basis)
    }
}

/// Maximizes `tr(X (C)_qq)` over recoveries from span(`basis`) to `H_S`.
pub fn reduced_sdp<T: Real>(data: &DataMatrix<T>, basis: &Matrix<T>, tol: f64) -> Result<ReducedSolution<T>, StructuredError> {
    let (d_s, d_c) = (data.d_s(), data.d_c());
    let d_q = basis.cols();
    if basis.rows() != d_c || d_q == 0 {
        return Err(StructuredError::Invalid(format!("subspace basis {:?} for d_C = {d_c}", basis.shape())));
    }
    let kernel = reduce_kernel(data.matrix(), basis, d_s);
    let problem = SdpProblem::new(kernel, d_s, d_q)?;
    let solution = match solve_sdp(&problem, SdpOptions::with_tol(tol)) {
        Err(OptimalError::NoConvergence { best, .. }) => best.cast(),
        other => other?,
    };
    let reduced = kraus_from_choi(&solution.x, d_s, d_q, 1e-9)?;
    let badj = basis.adjoint();
    let kraus: Vec<Matrix<T>> = reduced.iter().map(|r| r.matmul(&badj)).collect();
    let value = data.kraus_fidelity(&kraus);
    Ok(ReducedSolution {
        basis: basis.clone(),
        kraus,
        value,
        dual: solution.y.clone(),
        solution,
    })
}
