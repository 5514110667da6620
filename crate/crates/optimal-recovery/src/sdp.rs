use qer_linalg::{identity_kron, max_eigenvalue, min_eigenvalue, partial_trace, Cholesky, Complex, Factor, Matrix, Real};
use qer_ops::{ChoiMatrix, DataMatrix};

use crate::OptimalError;

/// Largest `d_out · d_in` accepted by the dense solver.
pub const MAX_SDP_DIM: usize = 256;
/// Largest constraint dimension `d_in`; the Schur system has `d_in²` unknowns.
pub const MAX_CONSTRAINT_DIM: usize = 64;
/// Target for `‖ZX‖_F`, which decays only like the square root of the gap.
const SLACKNESS_TOL: f64 = 1e-9;
/// Accuracy accepted from the best iterate when the iteration breaks down.
const BREAKDOWN_TOL: f64 = 1e-7;

/// `max tr(X K)` over `X ⪰ 0` on `d_out ⊗ d_in` with `tr_out X = I_{d_in}`.
#[derive(Clone, Debug)]
pub struct SdpProblem<T: Real> {
    kernel: Matrix<T>,
    d_out: usize,
    d_in: usize,
}

impl<T: Real> SdpProblem<T> {
    pub fn new(kernel: Matrix<T>, d_out: usize, d_in: usize) -> Result<Self, OptimalError> {
        let n = d_out * d_in;
        if kernel.shape() != (n, n) {
            return Err(OptimalError::Dimension(format!("kernel {:?} for {d_out} x {d_in}", kernel.shape())));
        }
        if !kernel.is_finite() {
            return Err(OptimalError::Dimension("kernel has non-finite entries".into()));
        }
        if n > MAX_SDP_DIM || d_in > MAX_CONSTRAINT_DIM {
            return Err(OptimalError::TooLarge { d_out, d_in });
        }
        Ok(Self {
            kernel: kernel.hermitian_part(),
            d_out,
            d_in,
        })
    }

    /// The optimal-recovery problem: `d_out = d_S`, `d_in = d_C`, kernel `C`.
    pub fn recovery(data: &DataMatrix<T>) -> Result<Self, OptimalError> {
        Self::new(data.matrix().clone(), data.d_s(), data.d_c())
    }

    pub fn kernel(&self) -> &Matrix<T> {
        &self.kernel
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn dim(&self) -> usize {
        self.d_out * self.d_in
    }

    pub fn objective(&self, x: &Matrix<T>) -> T {
        x.trace_product(&self.kernel).re
    }

    /// `I_{d_out} ⊗ Y − K`
    pub fn slack(&self, y: &Matrix<T>) -> Matrix<T> {
        &identity_kron(self.d_out, y) - &self.kernel
    }

    pub fn trace_out(&self, x: &Matrix<T>) -> Matrix<T> {
        partial_trace(x, self.d_out, self.d_in, Factor::First).expect("dimensions fixed by the problem")
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SdpOptions {
    /// Target duality gap, relative to `1 + |primal| + |dual|`.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iterations: 100,
        }
    }
}

impl SdpOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct SdpSolution<T: Real> {
    pub x: Matrix<T>,
    pub y: Matrix<T>,
    pub d_out: usize,
    pub d_in: usize,
    pub primal_value: T,
    pub dual_value: T,
    /// `dual_value − primal_value`
    pub gap: T,
    pub iterations: usize,
    /// `‖tr_out X − I‖_F`
    pub primal_residual: f64,
    /// `‖I ⊗ Y − K − Z‖_F` for the internal slack `Z`.
    pub dual_residual: f64,
}

impl<T: Real> SdpSolution<T> {
    pub fn choi(&self) -> ChoiMatrix<T> {
        ChoiMatrix::new(self.x.clone(), self.d_out, self.d_in).expect("solver keeps dimensions")
    }
}

fn sym<T: Real>(a: &Matrix<T>) -> Matrix<T> {
    a.hermitian_part()
}

/// Largest `α ≤ 1` with `M + α·D ⪰ 0`, shortened by `0.95`.
fn step_length<T: Real>(chol: &Cholesky<T>, d: &Matrix<T>) -> Result<T, OptimalError> {
    let g = chol.congruence_inverse(d);
    let lo = min_eigenvalue(&g)?;
    let full = if lo.as_f64() < 0.0 { -T::one() / lo } else { T::infinity() };
    Ok((T::lit(0.95) * full).min(T::one()))
}

struct Direction<T: Real> {
    dx: Matrix<T>,
    dy: Matrix<T>,
    dz: Matrix<T>,
}

/// Schur matrix of `ΔY ↦ ½ tr_out(W(I⊗ΔY)X + X(I⊗ΔY)W)` on row-major `vec(ΔY)`.
fn schur_matrix<T: Real>(w: &Matrix<T>, x: &Matrix<T>, d_out: usize, d_in: usize) -> Matrix<T> {
    let d = d_in;
    let m = d * d;
    let mut k = vec![Complex::new(T::zero(), T::zero()); m * m];
    let half = T::lit(0.5);
    let block = |a: &Matrix<T>, s: usize, t: usize| Matrix::from_fn(d, d, |i, j| a[(s * d + i, t * d + j)]);
    for s in 0..d_out {
        for t in 0..d_out {
            let (w_st, x_ts) = (block(w, s, t), block(x, t, s));
            let (x_st, w_ts) = (block(x, s, t), block(w, t, s));
            for a in 0..d {
                for c in 0..d {
                    let (p, q) = (w_st[(a, c)] * half, x_st[(a, c)] * half);
                    for b in 0..d {
                        let row = (a * d + b) * m + c * d;
                        for dd in 0..d {
                            k[row + dd] = k[row + dd] + p * x_ts[(dd, b)] + q * w_ts[(dd, b)];
                        }
                    }
                }
            }
        }
    }
    Matrix::new(m, m, k).expect("sized above").hermitian_part()
}

struct State<'a, T: Real> {
    problem: &'a SdpProblem<T>,
    x: Matrix<T>,
    y: Matrix<T>,
    z: Matrix<T>,
}

impl<T: Real> State<'_, T> {
    fn direction(
        &self,
        w: &Matrix<T>,
        schur: &Cholesky<T>,
        g: &Matrix<T>,
        r_p: &Matrix<T>,
        r_d: &Matrix<T>,
    ) -> Direction<T> {
        let p = self.problem;
        let base = g + &sym(&self.x.matmul(r_d).matmul(w));
        let rhs = &p.trace_out(&base) - r_p;
        let dy = Matrix::new(p.d_in, p.d_in, schur.solve(rhs.data())).expect("sized").hermitian_part();
        let dz = &identity_kron(p.d_out, &dy) - r_d;
        let dx = g - &sym(&self.x.matmul(&dz).matmul(w));
        Direction { dx, dy, dz }
    }

    /// One predictor-corrector step. Fails when `X` or `Z` lose definiteness
    /// numerically.
    fn advance(&mut self, n: usize) -> Result<(), OptimalError> {
        let problem = self.problem;
        let (d_out, d_in) = (problem.d_out, problem.d_in);
        let r_p = &Matrix::identity(d_in) - &problem.trace_out(&self.x);
        let r_d = &(&problem.kernel - &identity_kron(d_out, &self.y)) + &self.z;
        let chol_z = Cholesky::new(&self.z)?;
        let chol_x = Cholesky::new(&self.x)?;
        let w = chol_z.inverse();
        let mu = self.x.trace_product(&self.z).re / T::lit(n as f64);
        let schur = Cholesky::new(&schur_matrix(&w, &self.x, d_out, d_in))?;

        let pred = self.direction(&w, &schur, &self.x.scale(-T::one()), &r_p, &r_d);
        let ap = step_length(&chol_x, &pred.dx)?;
        let ad = step_length(&chol_z, &pred.dz)?;
        let x_a = &self.x + &pred.dx.scale(ap);
        let z_a = &self.z + &pred.dz.scale(ad);
        let mu_a = x_a.trace_product(&z_a).re / T::lit(n as f64);
        let sigma = (mu_a / mu).powi(3).min(T::one());

        let second = sym(&pred.dx.matmul(&pred.dz).matmul(&w));
        let g = &(&w.scale(sigma * mu) - &self.x) - &second;
        let corr = self.direction(&w, &schur, &g, &r_p, &r_d);
        let ap = step_length(&chol_x, &corr.dx)?;
        let ad = step_length(&chol_z, &corr.dz)?;
        let x = (&self.x + &corr.dx.scale(ap)).hermitian_part();
        let y = (&self.y + &corr.dy.scale(ad)).hermitian_part();
        let z = (&self.z + &corr.dz.scale(ad)).hermitian_part();
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(OptimalError::Numerical("non-finite iterate".into()));
        }
        self.x = x;
        self.y = y;
        self.z = z;
        Ok(())
    }
}

/// Primal-dual interior-point method (HKM direction, Mehrotra
/// predictor-corrector) started from `X = I/d_out`, `Y = (λ_max(K) + 1) I`.
pub fn solve_sdp<T: Real>(problem: &SdpProblem<T>, options: SdpOptions) -> Result<SdpSolution<T>, OptimalError> {
    let n = problem.dim();
    let (d_out, d_in) = (problem.d_out, problem.d_in);
    let id_in = Matrix::<T>::identity(d_in);
    let lam = max_eigenvalue(&problem.kernel)?;
    let mut st = State {
        problem,
        x: Matrix::identity(n).scale(T::one() / T::lit(d_out as f64)),
        y: id_in.scale(lam.max(T::zero()) + T::one()),
        z: Matrix::zeros(n, n),
    };
    st.z = problem.slack(&st.y);
    let mut best: Option<SdpSolution<T>> = None;
    for it in 0..options.max_iterations {
        let r_p = &id_in - &problem.trace_out(&st.x);
        let r_d = &(&problem.kernel - &identity_kron(d_out, &st.y)) + &st.z;
        let primal = problem.objective(&st.x);
        let dual = st.y.trace().re;
        let sol = SdpSolution {
            x: st.x.clone(),
            y: st.y.clone(),
            d_out,
            d_in,
            primal_value: primal,
            dual_value: dual,
            gap: dual - primal,
            iterations: it,
            primal_residual: r_p.frobenius_norm().as_f64(),
            dual_residual: r_d.frobenius_norm().as_f64(),
        };
        let scale = 1.0 + primal.abs().as_f64() + dual.abs().as_f64();
        let slackness = st.z.matmul(&st.x).frobenius_norm().as_f64();
        let converged = sol.gap.abs().as_f64() <= options.tol * scale
            && sol.primal_residual <= options.tol.max(1e-10) * scale
            && sol.dual_residual <= options.tol.max(1e-10) * scale
            && slackness <= options.tol.max(SLACKNESS_TOL) * scale;
        if converged {
            return Ok(sol);
        }
        best = Some(sol);
        if st.advance(n).is_err() {
            break;
        }
    }
    let best = best.expect("at least one iteration");
    let scale = 1.0 + best.primal_value.abs().as_f64() + best.dual_value.abs().as_f64();
    let loose = options.tol.max(BREAKDOWN_TOL) * scale;
    if best.gap.abs().as_f64() <= loose && best.primal_residual <= loose && best.dual_residual <= loose {
        return Ok(best);
    }
    Err(OptimalError::NoConvergence {
        gap: best.gap.as_f64(),
        best: Box::new(best.cast()),
    })
}

impl<T: Real> SdpSolution<T> {
    pub fn cast<U: Real>(&self) -> SdpSolution<U> {
        SdpSolution {
            x: self.x.cast(),
            y: self.y.cast(),
            d_out: self.d_out,
            d_in: self.d_in,
            primal_value: U::lit(self.primal_value.as_f64()),
            dual_value: U::lit(self.dual_value.as_f64()),
            gap: U::lit(self.gap.as_f64()),
            iterations: self.iterations,
            primal_residual: self.primal_residual,
            dual_residual: self.dual_residual,
        }
    }
}

/// Optimal recovery for the data matrix `C`: `max tr(XC)` with `tr_S X = I_{d_C}`.
pub fn solve_optimal_recovery<T: Real>(data: &DataMatrix<T>, tol: f64) -> Result<SdpSolution<T>, OptimalError> {
    solve_sdp(&SdpProblem::recovery(data)?, SdpOptions::with_tol(tol))
}
