use qer_linalg::{cr, Complex, Matrix, Real};
use qer_ops::RecoveryOperation;

use crate::StabilizerError;

/// `exp(iθY)`.
fn rotation<T: Real>(theta: T) -> Matrix<T> {
    let (s, c) = theta.sin_cos();
    let e = [[c, s], [-s, c]];
    Matrix::from_fn(2, 2, |i, j| cr(e[i][j]))
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// 4×4 operator on `(n1, n3)`, basis index `2·n1 + n3`, acting as `op` on one
/// qubit (`0` = `n1`) and identity on the other.
fn on_pair<T: Real>(op: &Matrix<T>, which: usize) -> Matrix<T> {
    let id = Matrix::identity(2);
    if which == 0 {
        op.kron(&id)
    } else {
        id.kron(op)
    }
}

/// Circuit B: CNOT `n3 → n1`, `R(θ)` on `n3`, `R(π/4 − θ)` on `n3` controlled
/// by `n1`, measure `n3`, output `n1`.
fn branch_00<T: Real>(theta: T) -> Vec<Matrix<T>> {
    let cnot31 = Matrix::from_fn(4, 4, |r, c| {
        let (n1, n3) = (c >> 1, c & 1);
        let target = (n1 ^ n3) << 1 | n3;
        if r == target {
            Complex::new(T::one(), T::zero())
        } else {
            zero()
        }
    });
    let r1 = on_pair(&rotation(theta), 1);
    let r2 = rotation(T::lit(std::f64::consts::FRAC_PI_4) - theta);
    let controlled = Matrix::from_fn(4, 4, |r, c| {
        if r >> 1 != c >> 1 {
            zero()
        } else if r >> 1 == 0 {
            if r == c {
                Complex::new(T::one(), T::zero())
            } else {
                zero()
            }
        } else {
            r2[(r & 1, c & 1)]
        }
    });
    let w = controlled.matmul(&r1).matmul(&cnot31);
    (0..2)
        .map(|m| Matrix::from_fn(2, 4, |out, c| w[(out << 1 | m, c)]))
        .collect()
}

/// Circuits C and D: flip the surviving qubit, rotate an ancilla by `R(θ')`
/// controlled on it, measure the ancilla and keep that qubit.
fn branch_single<T: Real>(theta_p: T, keep: usize) -> Vec<Matrix<T>> {
    let (s, c) = theta_p.sin_cos();
    let o = T::one();
    let dm = [[o, c], [T::zero(), -s]];
    let mut out = Vec::with_capacity(4);
    for traced in 0..2 {
        for diag in &dm {
            out.push(Matrix::from_fn(2, 4, |row, col| {
                let (n1, n3) = (col >> 1, col & 1);
                let (kept, other) = if keep == 0 { (n1, n3) } else { (n3, n1) };
                let flipped = kept ^ 1;
                if other == traced && row == flipped {
                    Complex::new(diag[flipped], T::zero())
                } else {
                    zero()
                }
            }));
        }
    }
    out
}

/// Outcome `11`: keep `n1`, discard `n3`.
fn branch_11<T: Real>() -> Vec<Matrix<T>> {
    (0..2)
        .map(|t| {
            Matrix::from_fn(2, 4, |row, col| {
                if col & 1 == t && col >> 1 == row {
                    Complex::new(T::one(), T::zero())
                } else {
                    zero()
                }
            })
        })
        .collect()
}

/// Measurement-circuit recovery for the `[4,1]` code: CNOT `1→2` and `3→4`,
/// measure qubits 2 and 4, then branch on `(M₂, M₄)` with
/// `tan θ = (1−γ)²` and `cos θ' = 1−γ`. Output in the code's logical basis.
pub fn leung_recovery<T: Real>(gamma: T) -> Result<RecoveryOperation<T>, StabilizerError> {
    let g = gamma.as_f64();
    if !(0.0..1.0).contains(&g) {
        return Err(StabilizerError::Invalid(format!("gamma = {g} outside [0, 1)")));
    }
    let one = T::one();
    let theta = ((one - gamma) * (one - gamma)).atan();
    let theta_p = (one - gamma).acos();
    let branches = [
        ((0, 0), branch_00(theta), "00"),
        ((1, 0), branch_single(theta_p, 1), "10"),
        ((0, 1), branch_single(theta_p, 0), "01"),
        ((1, 1), branch_11(), "11"),
    ];
    let mut kraus = Vec::with_capacity(12);
    let mut labels = Vec::with_capacity(12);
    for ((m2, m4), ws, tag) in branches {
        // Rows of (CNOT₁₂ CNOT₃₄) that land on |n1 m2 n3 m4⟩.
        let select = Matrix::from_fn(4, 16, |r, col| {
            let (n1, n3) = (r >> 1, r & 1);
            let b = [col >> 3 & 1, col >> 2 & 1, col >> 1 & 1, col & 1];
            let after = [b[0], b[1] ^ b[0], b[2], b[3] ^ b[2]];
            if after == [n1, m2, n3, m4] {
                Complex::new(T::one(), T::zero())
            } else {
                zero()
            }
        });
        for (i, w) in ws.iter().enumerate() {
            kraus.push(w.matmul(&select));
            labels.push(format!("{tag}/{i}"));
        }
    }
    Ok(RecoveryOperation::labelled(kraus, labels)?)
}
