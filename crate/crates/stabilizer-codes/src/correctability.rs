use qer_channels::apply_on_qubit;
use qer_linalg::{Complex, Matrix, Real};

use crate::StabilizerError;

/// Tolerance on `‖U†E_i†E_jU − α_ij I‖`.
pub const CORRECTABILITY_TOL: f64 = 1e-9;

/// Outcome of the error-correction conditions check.
#[derive(Clone, Debug)]
pub struct Correctability<T: Real> {
    pub satisfied: bool,
    /// `α_ij = tr(U†E_i†E_jU)/d_S`.
    pub alpha: Matrix<T>,
    /// Largest Frobenius deviation from proportionality.
    pub residual: f64,
}

/// Checks `P_C E_i†E_j P_C = α_ij P_C` for the code with encoding isometry `u`.
pub fn check_correctability<T: Real>(u: &Matrix<T>, errors: &[Matrix<T>]) -> Result<Correctability<T>, StabilizerError> {
    let images = errors
        .iter()
        .map(|e| e.try_matmul(u))
        .collect::<Result<Vec<_>, _>>()?;
    check_correctability_images(&images)
}

/// Same check given the images `E_i U` directly.
pub fn check_correctability_images<T: Real>(images: &[Matrix<T>]) -> Result<Correctability<T>, StabilizerError> {
    let first = images
        .first()
        .ok_or_else(|| StabilizerError::Invalid("no errors".into()))?;
    let (rows, d_s) = first.shape();
    if images.iter().any(|m| m.shape() != (rows, d_s)) {
        return Err(StabilizerError::Invalid("error images of different shapes".into()));
    }
    let m = images.len();
    let adj: Vec<Matrix<T>> = images.iter().map(Matrix::adjoint).collect();
    let id = Matrix::<T>::identity(d_s);
    let scale = T::one() / T::lit(d_s as f64);
    let mut alpha = Matrix::zeros(m, m);
    let mut residual = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let g = adj[i].matmul(&images[j]);
            let a = g.trace() * scale;
            alpha[(i, j)] = a;
            residual = residual.max(g.distance(&id.scale_c(a)).as_f64());
        }
    }
    Ok(Correctability {
        satisfied: residual <= CORRECTABILITY_TOL,
        alpha,
        residual,
    })
}

/// `E_1 = √γ |0⟩⟨1|`.
pub fn damping_operator<T: Real>(gamma: T) -> Matrix<T> {
    let mut e = Matrix::zeros(2, 2);
    e[(0, 1)] = Complex::new(gamma.sqrt(), T::zero());
    e
}

/// `E_1` on each listed qubit (0-based) and identity elsewhere, applied to `u`.
pub fn damping_image<T: Real>(u: &Matrix<T>, n: usize, gamma: T, qubits: &[usize]) -> Matrix<T> {
    let e = damping_operator(gamma);
    qubits.iter().fold(u.clone(), |m, &q| apply_on_qubit(&e, q, n, &m))
}

/// Images `E U` for the identity and every damping pattern of at most
/// `max_order` distinct qubits, in order of increasing size then lexicographic.
pub fn damping_error_images<T: Real>(u: &Matrix<T>, n: usize, gamma: T, max_order: usize) -> Vec<Matrix<T>> {
    let mut out = vec![u.clone()];
    for order in 1..=max_order.min(n) {
        for set in subsets(n, order) {
            out.push(damping_image(u, n, gamma, &set));
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for q in start..n {
            cur.push(q);
            rec(q + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
