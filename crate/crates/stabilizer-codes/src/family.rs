use qer_channels::apply_on_qubit;
use qer_linalg::{cr, hermitian_eig, Matrix, Real};
use qer_ops::RecoveryOperation;

use crate::library::adc_pairs;
use crate::{encoding_isometry, PauliOperator, StabilizerCode, StabilizerError};

/// Pair outcome: `0` for even parity, `1` when the first qubit of the pair
/// was damped (`01`), `2` when the second was (`10`).
fn pair_outcome(r: usize, n: usize, (a, b): (usize, usize)) -> usize {
    let ba = r >> (n - a) & 1;
    let bb = r >> (n - b) & 1;
    match (ba, bb) {
        (0, 1) => 1,
        (1, 0) => 2,
        _ => 0,
    }
}

fn cnot<T: Real>(m: &Matrix<T>, control: usize, target: usize, n: usize) -> Matrix<T> {
    let cb = 1usize << (n - 1 - control);
    let tb = 1usize << (n - 1 - target);
    Matrix::from_fn(m.rows(), m.cols(), |r, j| {
        let src = if r & cb != 0 { r ^ tb } else { r };
        m[(src, j)]
    })
}

fn hadamard<T: Real>() -> Matrix<T> {
    let h = T::one() / T::lit(2.0).sqrt();
    Matrix::from_fn(2, 2, |i, j| cr(if i == 1 && j == 1 { -h } else { h }))
}

/// Appends the Kraus operators `√λ_t |t⟩⟨v_t|` of `I − Σ W W†` on the basis
/// states `rows`, packed `d_s` at a time.
fn complete_block<T: Real>(rows: &[usize], images: &[&Matrix<T>], d_c: usize, d_s: usize, kraus: &mut Vec<Matrix<T>>) -> Result<(), StabilizerError> {
    let k = rows.len();
    let mut delta = Matrix::<T>::identity(k);
    for w in images {
        let block = Matrix::from_fn(k, w.cols(), |i, j| w[(rows[i], j)]);
        delta = &delta - &block.matmul(&block.adjoint());
    }
    let eig = hermitian_eig(&delta.hermitian_part())?;
    let keep: Vec<usize> = (0..k).filter(|&t| eig.eigenvalues[t].as_f64() > 1e-12).collect();
    for chunk in keep.chunks(d_s) {
        let mut m = Matrix::zeros(d_s, d_c);
        for (t, &e) in chunk.iter().enumerate() {
            let s = eig.eigenvalues[e].sqrt();
            for (i, &r) in rows.iter().enumerate() {
                m[(t, r)] = eig.eigenvectors[(i, e)].conj() * s;
            }
        }
        kraus.push(m);
    }
    Ok(())
}

/// Syndrome-based recovery for the `[2(M+1), M]` amplitude-damping codes.
///
/// The `ZZ` pairs are measured and, when a pair has odd parity, the damped
/// qubit is read off. With damped set `D` and first damped qubit `i₁`, the
/// state is restored by `V = X_D · CNOT(i₁ → all others) · H_{i₁}` and decoded.
/// The undamped branch measures `X^{⊗n}` and applies `Z_n` on `−1`.
/// Remaining weight in each branch is sent to the decoder by an arbitrary
/// completion.
pub fn adc_family_recovery<T: Real>(code: &StabilizerCode) -> Result<RecoveryOperation<T>, StabilizerError> {
    let n = code.n();
    let m = code.k();
    if n != 2 * (m + 1) || !code.name.starts_with("adc_") {
        return Err(StabilizerError::Invalid(format!("{} is not a generalized amplitude-damping code", code.name)));
    }
    let pairs = adc_pairs(m);
    let d_c = code.d_c();
    let d_s = code.d_s();
    let u = encoding_isometry::<T>(code)?;
    let patterns = 3usize.pow(pairs.len() as u32);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); patterns];
    for r in 0..d_c {
        let id = pairs.iter().fold(0, |acc, &p| acc * 3 + pair_outcome(r, n, p));
        members[id].push(r);
    }
    let h = hadamard::<T>();
    let mut kraus = Vec::new();
    let mut labels = Vec::new();
    for (id, rows) in members.iter().enumerate() {
        let mut digits = Vec::with_capacity(pairs.len());
        let mut rest = id;
        for _ in 0..pairs.len() {
            digits.push(rest % 3);
            rest /= 3;
        }
        digits.reverse();
        let mut damped: Vec<usize> = pairs
            .iter()
            .zip(&digits)
            .filter_map(|(&(a, b), &o)| match o {
                1 => Some(a - 1),
                2 => Some(b - 1),
                _ => None,
            })
            .collect();
        damped.sort_unstable();
        let label = if damped.is_empty() {
            "+".to_string()
        } else {
            damped.iter().map(|q| format!("d{}", q + 1)).collect::<Vec<_>>().join(",")
        };
        if damped.is_empty() {
            let zn = PauliOperator::single(n, n - 1, 'Z')?.apply(&u);
            kraus.push(u.adjoint());
            kraus.push(zn.adjoint());
            labels.push(label.clone());
            labels.push("-".to_string());
            complete_block(rows, &[&u, &zn], d_c, d_s, &mut kraus)?;
        } else {
            let mut w = u.clone();
            for &q in &damped {
                w = PauliOperator::single(n, q, 'X')?.apply(&w);
            }
            let i1 = damped[0];
            for t in (0..n).filter(|&t| t != i1) {
                w = cnot(&w, i1, t, n);
            }
            w = apply_on_qubit(&h, i1, n, &w);
            let mut r = Matrix::zeros(d_s, d_c);
            for &row in rows {
                for j in 0..d_s {
                    r[(j, row)] = w[(row, j)].conj();
                }
            }
            let projected = r.adjoint();
            kraus.push(r);
            labels.push(label.clone());
            complete_block(rows, &[&projected], d_c, d_s, &mut kraus)?;
        }
        for extra in 0..kraus.len() - labels.len() {
            labels.push(format!("{label}/c{extra}"));
        }
    }
    Ok(RecoveryOperation::labelled(kraus, labels)?)
}
