use qer_linalg::{vec_inner, vec_norm, Complex, Matrix, Real};

use crate::symplectic::gf2_rank;
use crate::{PauliOperator, StabilizerCode, StabilizerError};

/// Applies `Π (I + g)/2` to `v`.
fn project<T: Real>(gens: &[PauliOperator], v: &mut Vec<Complex<T>>) {
    let half = T::lit(0.5);
    for g in gens {
        let gv = g.apply_vector(v);
        for (a, b) in v.iter_mut().zip(gv) {
            *a = (*a + b) * half;
        }
    }
}

fn basis_vector<T: Real>(d: usize, b: usize) -> Vec<Complex<T>> {
    let mut v = vec![Complex::new(T::zero(), T::zero()); d];
    v[b] = Complex::new(T::one(), T::zero());
    v
}

/// Rotates `v` so its largest-magnitude entry (first on ties) is real positive.
fn fix_phase<T: Real>(v: &mut [Complex<T>]) {
    let mut best = 0;
    let mut best_abs = T::zero();
    for (i, a) in v.iter().enumerate() {
        if a.norm() > best_abs + T::lit(1e-12) {
            best_abs = a.norm();
            best = i;
        }
    }
    if best_abs > T::zero() {
        let ph = v[best].conj() / best_abs;
        for a in v.iter_mut() {
            *a = *a * ph;
        }
    }
}

/// Normalized `Q|b⟩` for the basis state `b` with the largest `⟨b|Q|b⟩`.
fn leading_column<T: Real>(gens: &[PauliOperator], d: usize) -> Option<Vec<Complex<T>>> {
    let mut best: Option<(T, Vec<Complex<T>>)> = None;
    for b in 0..d {
        let mut v = basis_vector::<T>(d, b);
        project(gens, &mut v);
        let w = v[b].re;
        if w > T::lit(1e-12) && best.as_ref().is_none_or(|(bw, _)| w > *bw + T::lit(1e-12)) {
            best = Some((w, v));
        }
    }
    best.map(|(_, v)| {
        let n = vec_norm(&v);
        let mut v: Vec<_> = v.into_iter().map(|a| a / n).collect();
        fix_phase(&mut v);
        v
    })
}

/// `U_C` with column `m = (i_1…i_k)` the codeword with `Z̄_j` eigenvalue `(−1)^{i_j}`.
pub fn encoding_isometry<T: Real>(code: &StabilizerCode) -> Result<Matrix<T>, StabilizerError> {
    let n = code.n();
    let k = code.k();
    let d = 1usize << n;
    let mut columns = Vec::with_capacity(1 << k);
    for m in 0..(1usize << k) {
        let mut gens = code.generators().to_vec();
        for (j, z) in code.logical_z().iter().enumerate() {
            let bit = m >> (k - 1 - j) & 1;
            gens.push(if bit == 1 { z.negate() } else { *z });
        }
        let col = leading_column::<T>(&gens, d)
            .ok_or_else(|| StabilizerError::Invalid(format!("empty logical eigenspace for column {m}")))?;
        columns.push(col);
    }
    let u = Matrix::from_columns(d, &columns)?;
    let residual = u.adjoint().matmul(&u).distance(&Matrix::identity(1 << k)).as_f64();
    if residual > 1e-10 {
        return Err(StabilizerError::Invalid(format!("encoding is not an isometry ({residual:e})")));
    }
    Ok(u)
}

/// Orthonormal basis (columns) of the joint `+1` eigenspace of commuting
/// signed Paulis. Contradictory signs give an `2^n × 0` matrix.
pub fn stabilized_subspace<T: Real>(gens: &[PauliOperator]) -> Result<Matrix<T>, StabilizerError> {
    let n = gens
        .first()
        .map(PauliOperator::n)
        .ok_or_else(|| StabilizerError::Invalid("no generators".into()))?;
    let d = 1usize << n;
    let rank = gf2_rank(&gens.iter().map(PauliOperator::symplectic).collect::<Vec<_>>());
    let target = 1usize << (n - rank);
    let mut basis: Vec<Vec<Complex<T>>> = Vec::new();
    for b in 0..d {
        if basis.len() == target {
            break;
        }
        let mut v = basis_vector::<T>(d, b);
        project(gens, &mut v);
        for q in &basis {
            let c = vec_inner(q, &v);
            for (a, x) in v.iter_mut().zip(q) {
                *a = *a - c * x;
            }
        }
        let nv = vec_norm(&v);
        if nv > T::lit(1e-8) {
            basis.push(v.into_iter().map(|a| a / nv).collect());
        }
    }
    if basis.is_empty() {
        return Ok(Matrix::zeros(d, 0));
    }
    Ok(Matrix::from_columns(d, &basis)?)
}
