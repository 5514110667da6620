use qer_linalg::{c, Complex, Matrix, Real};
use qer_ops::QuantumChannel;

use crate::ChannelError;

fn check_unit<T: Real>(name: &str, x: T) -> Result<(), ChannelError> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(ChannelError::InvalidParameter(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

/// Kraus operators `E_0 = diag(1, √(1−γ))`, `E_1 = √γ |0⟩⟨1|`.
pub fn amplitude_damping<T: Real>(gamma: T) -> Result<QuantumChannel<T>, ChannelError> {
    check_unit("gamma", gamma)?;
    let z = T::zero();
    let e0 = Matrix::real_diag(&[T::one(), (T::one() - gamma).sqrt()]);
    let mut e1 = Matrix::real_diag(&[z, z]);
    e1[(0, 1)] = Complex::new(gamma.sqrt(), z);
    Ok(QuantumChannel::new(vec![e0, e1])?)
}

/// Single-qubit Pauli matrix for `I`, `X`, `Y` or `Z`.
pub fn pauli_matrix<T: Real>(label: char) -> Option<Matrix<T>> {
    let o = c::<T>(0.0, 0.0);
    let one = c::<T>(1.0, 0.0);
    let i = c::<T>(0.0, 1.0);
    let d = match label {
        'I' => vec![one, o, o, one],
        'X' => vec![o, one, one, o],
        'Y' => vec![o, -i, i, o],
        'Z' => vec![one, o, o, -one],
        _ => return None,
    };
    Some(Matrix::new(2, 2, d).expect("finite"))
}

/// `(1−3p)ρ + p(XρX + YρY + ZρZ)`.
pub fn depolarizing<T: Real>(p: T) -> Result<QuantumChannel<T>, ChannelError> {
    check_unit("p", p)?;
    let rest = T::one() - T::lit(3.0) * p;
    if rest < -T::lit(1e-12) {
        return Err(ChannelError::InvalidParameter(format!("p = {p} exceeds 1/3")));
    }
    let ops: Vec<(String, T)> = vec![
        ("I".into(), rest.max(T::zero())),
        ("X".into(), p),
        ("Y".into(), p),
        ("Z".into(), p),
    ];
    pauli_channel(&ops)
}

/// Channel with Kraus operators `√p_i · P_i` for Pauli strings `P_i` of equal length.
pub fn pauli_channel<T: Real>(terms: &[(String, T)]) -> Result<QuantumChannel<T>, ChannelError> {
    let first = terms
        .first()
        .ok_or_else(|| ChannelError::InvalidParameter("empty Pauli distribution".into()))?;
    let n = first.0.chars().count();
    if n == 0 {
        return Err(ChannelError::InvalidParameter("empty Pauli label".into()));
    }
    let mut total = 0.0;
    let mut kraus = Vec::with_capacity(terms.len());
    for (label, p) in terms {
        if *p < T::zero() || !p.is_finite() {
            return Err(ChannelError::InvalidParameter(format!("probability {p} for {label}")));
        }
        if label.chars().count() != n {
            return Err(ChannelError::InvalidParameter(format!("label {label} is not {n} qubits")));
        }
        total += p.as_f64();
        let mut op = Matrix::identity(1);
        for ch in label.chars() {
            let m = pauli_matrix::<T>(ch.to_ascii_uppercase())
                .ok_or_else(|| ChannelError::InvalidParameter(format!("unknown Pauli {ch} in {label}")))?;
            op = op.kron(&m);
        }
        kraus.push(op.scale(p.sqrt()));
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(ChannelError::InvalidParameter(format!("probabilities sum to {total}")));
    }
    Ok(QuantumChannel::new(kraus)?)
}

/// Pure-state rotation channel together with its solved constants.
#[derive(Clone, Debug)]
pub struct PureStateRotation<T: Real> {
    pub channel: QuantumChannel<T>,
    pub alpha: T,
    pub beta: T,
}

/// Qubit channel taking `|±θ/2⟩` to `|±(θ−φ)/2⟩`, where `|x⟩ = cos x|0⟩ + sin x|1⟩`.
///
/// Kraus operators are `α|±(θ−φ)/2⟩⟨∓θ/2 + π/2|`-type rank-one maps and
/// `β·diag(cos((θ−φ)/2)/cos(θ/2), sin((θ−φ)/2)/sin(θ/2))`. The constants
/// `α, β ≥ 0` solve the diagonal of `Σ E†E = I`.
pub fn pure_state_rotation<T: Real>(theta: T, phi: T) -> Result<PureStateRotation<T>, ChannelError> {
    if !(phi > T::zero() && phi <= theta && theta < T::PI()) {
        return Err(ChannelError::InvalidParameter(format!(
            "need 0 < phi <= theta < pi, got theta = {theta}, phi = {phi}"
        )));
    }
    let two = T::lit(2.0);
    let half = (theta - phi) / two;
    let (a, b) = (half.cos(), half.sin());
    let (s, cc) = ((theta / two).sin(), (theta / two).cos());
    // [2s²  a²/c²] [α²]   [1]
    // [2c²  b²/s²] [β²] = [1]
    let m11 = two * s * s;
    let m12 = a * a / (cc * cc);
    let m21 = two * cc * cc;
    let m22 = b * b / (s * s);
    let det = m11 * m22 - m12 * m21;
    if det.abs() < T::lit(1e-12) {
        return Err(ChannelError::NoSolution(format!("singular constraint system at theta - phi = {}", theta - phi)));
    }
    let alpha2 = (m22 - m12) / det;
    let beta2 = (m11 - m21) / det;
    if alpha2 < T::zero() || beta2 < T::zero() {
        return Err(ChannelError::NoSolution(format!("alpha^2 = {alpha2}, beta^2 = {beta2}")));
    }
    let (alpha, beta) = (alpha2.sqrt(), beta2.sqrt());
    let rank_one = |sign: T| {
        Matrix::from_fn(2, 2, |i, j| {
            let row = if i == 0 { a } else { b };
            let col = if j == 0 { s } else { cc };
            let sg = if i == j { T::one() } else { sign };
            Complex::new(alpha * sg * row * col, T::zero())
        })
    };
    let e3 = Matrix::real_diag(&[beta * a / cc, beta * b / s]);
    let kraus = vec![rank_one(T::one()), rank_one(-T::one()), e3];
    let probe = QuantumChannel::from_kraus_unchecked(kraus)?;
    let residual = probe.cptp_residual().as_f64();
    let offdiag = probe.completeness()[(0, 1)].norm().as_f64();
    if residual > 1e-9 || offdiag > 1e-9 {
        return Err(ChannelError::NoSolution(format!("CPTP residual {residual:e}")));
    }
    Ok(PureStateRotation {
        channel: QuantumChannel::new(probe.into_kraus())?,
        alpha,
        beta,
    })
}
