use crate::symplectic::gf2_rank;
use crate::{PauliOperator, StabilizerCode, StabilizerError};

pub const LIBRARY_CODES: [&str; 5] = ["five_qubit", "steane", "shor", "leung_41", "gottesman_83"];

pub fn five_qubit() -> StabilizerCode {
    StabilizerCode::from_strings("five_qubit", &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"], &["XXXXX"], &["ZZZZZ"])
        .expect("tabulated code")
}

pub fn steane() -> StabilizerCode {
    StabilizerCode::from_strings(
        "steane",
        &["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"],
        &["XXXXXXX"],
        &["ZZZZZZZ"],
    )
    .expect("tabulated code")
}

/// Shor's nine-qubit code. The tabulated logical `Z̄` is `X^{⊗9}` and `X̄` is `Z^{⊗9}`.
pub fn shor() -> StabilizerCode {
    StabilizerCode::from_strings(
        "shor",
        &[
            "ZZIIIIIII",
            "IZZIIIIII",
            "IIIZZIIII",
            "IIIIZZIII",
            "IIIIIIZZI",
            "IIIIIIIZZ",
            "XXXXXXIII",
            "IIIXXXXXX",
        ],
        &["ZZZZZZZZZ"],
        &["XXXXXXXXX"],
    )
    .expect("tabulated code")
}

pub fn leung_41() -> StabilizerCode {
    StabilizerCode::from_strings("leung_41", &["XXXX", "ZZII", "IIZZ"], &["XXII"], &["ZIZI"]).expect("tabulated code")
}

/// Gottesman's `[8,3]` code. Logical operators are derived, not tabulated.
pub fn gottesman_83() -> StabilizerCode {
    let gens = ["XXXXXXXX", "ZZZZZZZZ", "IXIXYZYZ", "IXZYIXZY", "IYXZXZIY"]
        .iter()
        .map(|s| PauliOperator::parse(s).expect("valid"))
        .collect();
    StabilizerCode::with_derived_logicals("gottesman_83", gens).expect("tabulated code")
}

pub fn code_library(name: &str) -> Result<StabilizerCode, StabilizerError> {
    match name {
        "five_qubit" => Ok(five_qubit()),
        "steane" => Ok(steane()),
        "shor" => Ok(shor()),
        "leung_41" => Ok(leung_41()),
        "gottesman_83" => Ok(gottesman_83()),
        _ => Err(StabilizerError::UnknownCode(name.to_string())),
    }
}

/// Qubit pairs (1-based) measured by the `ZZ` generators of the `[2(M+1), M]` code:
/// `(1,2)`, then `(3, n)`, `(4, n−1)`, … nested towards the middle.
pub fn adc_pairs(m: usize) -> Vec<(usize, usize)> {
    let n = 2 * (m + 1);
    let mut pairs = vec![(1, 2)];
    for j in 0..m {
        pairs.push((3 + j, n - j));
    }
    pairs
}

fn with_ops(n: usize, ops: &[(usize, char)]) -> PauliOperator {
    let mut p = PauliOperator::identity(n);
    for &(q, c) in ops {
        p = p * PauliOperator::single(n, q - 1, c).expect("qubit in range");
    }
    p
}

/// `[2(M+1), M]` amplitude-damping code in standard form.
pub fn generalized_adc_code(m: usize) -> Result<StabilizerCode, StabilizerError> {
    if m == 0 {
        return Err(StabilizerError::Invalid("M must be at least 1".into()));
    }
    let n = 2 * (m + 1);
    if n > 20 {
        return Err(StabilizerError::Invalid(format!("M = {m} exceeds the dense-matrix range")));
    }
    let all_x = with_ops(n, &(1..=n).map(|q| (q, 'X')).collect::<Vec<_>>());
    let mut gens = vec![all_x];
    for (a, b) in adc_pairs(m) {
        gens.push(with_ops(n, &[(a, 'Z'), (b, 'Z')]));
    }
    let xs = (1..=m).map(|i| with_ops(n, &[(m + 3 - i, 'X'), (m + 2 + i, 'X')])).collect();
    let zs = (1..=m).map(|i| with_ops(n, &[(1, 'Z'), (m + 2 + i, 'Z')])).collect();
    StabilizerCode::new(format!("adc_{}_{}", n, m), gens, xs, zs)
}

/// Code with one `Z`-type generator per parity-check row plus `X^{⊗n}`.
/// Every row of `H` must have even weight, so that the all-ones word lies in `ker H`.
pub fn linear_adc_code(h: &[Vec<u8>]) -> Result<StabilizerCode, StabilizerError> {
    let n = h.first().map_or(0, Vec::len);
    if n == 0 || n > 20 || h.iter().any(|r| r.len() != n || r.iter().any(|&b| b > 1)) {
        return Err(StabilizerError::Invalid("parity-check rows must be 0/1 of equal length".into()));
    }
    let rows: Vec<u64> = h
        .iter()
        .map(|r| r.iter().fold(0u64, |acc, &b| acc << 1 | b as u64))
        .collect();
    let packed: Vec<u128> = rows.iter().map(|&r| r as u128).collect();
    if gf2_rank(&packed) != rows.len() {
        return Err(StabilizerError::Invalid("parity-check rows are dependent".into()));
    }
    if let Some(r) = rows.iter().find(|r| r.count_ones() % 2 == 1) {
        return Err(StabilizerError::Invalid(format!(
            "odd-weight parity check {r:0n$b}: the all-ones word is not a codeword"
        )));
    }
    let k = n - rows.len();
    if k < 2 {
        return Err(StabilizerError::Invalid("no logical space".into()));
    }
    let mut gens: Vec<PauliOperator> = rows
        .iter()
        .map(|&r| PauliOperator::new(n, 0, r, 0).expect("in range"))
        .collect();
    gens.push(PauliOperator::new(n, (1u64 << n) - 1, 0, 0).expect("in range"));
    StabilizerCode::with_derived_logicals(format!("linear_adc_{}_{}", n, k - 1), gens)
}

/// Parity-check matrix of the `[7,4]` Hamming code (rows `0001111`, `0110011`, `1010101`).
pub fn hamming_7_4() -> Vec<Vec<u8>> {
    ["0001111", "0110011", "1010101"]
        .iter()
        .map(|r| r.bytes().map(|b| b - b'0').collect())
        .collect()
}
