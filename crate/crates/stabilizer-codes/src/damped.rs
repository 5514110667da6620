use qer_linalg::{Matrix, Real};

use crate::encoding::stabilized_subspace;
use crate::{PauliOperator, StabilizerError};

/// Stabilizer of a damped subspace. `dimension` is `0` when the generators
/// carry contradictory signs.
#[derive(Clone, Debug, PartialEq)]
pub struct DampedSubspace {
    pub generators: Vec<PauliOperator>,
    pub dimension: usize,
}

impl DampedSubspace {
    pub fn is_empty(&self) -> bool {
        self.dimension == 0
    }

    pub fn is_one_dimensional(&self) -> bool {
        self.dimension == 1
    }

    /// Orthonormal basis of the subspace.
    pub fn basis<T: Real>(&self) -> Result<Matrix<T>, StabilizerError> {
        if self.dimension == 0 {
            let n = self.generators.first().map_or(0, PauliOperator::n);
            return Ok(Matrix::zeros(1 << n, 0));
        }
        stabilized_subspace(&self.generators)
    }
}

fn lead(v: u128) -> u32 {
    127 - v.leading_zeros()
}

/// Drops dependent generators. Returns `None` if some product of generators is `−I`.
fn independent(gens: Vec<PauliOperator>) -> Option<Vec<PauliOperator>> {
    let mut rows: Vec<PauliOperator> = Vec::new();
    let mut kept = Vec::new();
    for g in gens {
        let mut v = g;
        loop {
            let s = v.symplectic();
            if s == 0 {
                break;
            }
            match rows.iter().find(|r| lead(r.symplectic()) == lead(s)) {
                Some(r) => v = v * *r,
                None => break,
            }
        }
        if v.is_identity() {
            if v.phase() != 0 {
                return None;
            }
        } else {
            rows.push(v);
            kept.push(g);
        }
    }
    Some(kept)
}

/// Stabilizer of `|0⟩⟨1|_i` applied to the subspace stabilized by `generators`
/// (`qubit` is 0-based).
///
/// Site `i` is first put in reduced form: one generator with `X`/`Y` at `i`
/// (dropped) and one with `Z` at `i` (negated). `Z_i` is appended.
pub fn damped_subspace(generators: &[PauliOperator], qubit: usize) -> Result<DampedSubspace, StabilizerError> {
    let n = generators
        .first()
        .map(PauliOperator::n)
        .ok_or_else(|| StabilizerError::Invalid("no generators".into()))?;
    if qubit >= n {
        return Err(StabilizerError::Invalid(format!("qubit {qubit} of {n}")));
    }
    let bit = 1u64 << (n - 1 - qubit);
    let mut gens = generators.to_vec();
    if let Some(px) = gens.iter().position(|g| g.x_bits() & bit != 0) {
        let pivot = gens.remove(px);
        for g in gens.iter_mut() {
            if g.x_bits() & bit != 0 {
                *g = *g * pivot;
            }
        }
    }
    if let Some(pz) = gens.iter().position(|g| g.z_bits() & bit != 0) {
        let pivot = gens[pz];
        for (j, g) in gens.iter_mut().enumerate() {
            if j != pz && g.z_bits() & bit != 0 {
                *g = *g * pivot;
            }
        }
        gens[pz] = pivot.negate();
    }
    gens.push(PauliOperator::single(n, qubit, 'Z')?);
    Ok(match independent(gens.clone()) {
        Some(kept) => DampedSubspace {
            dimension: 1 << (n - kept.len()),
            generators: kept,
        },
        None => DampedSubspace {
            generators: gens,
            dimension: 0,
        },
    })
}

/// Applies [`damped_subspace`] for each qubit in turn.
pub fn damp_qubits(generators: &[PauliOperator], qubits: &[usize]) -> Result<DampedSubspace, StabilizerError> {
    let n = generators
        .first()
        .map(PauliOperator::n)
        .ok_or_else(|| StabilizerError::Invalid("no generators".into()))?;
    let mut s = match independent(generators.to_vec()) {
        Some(kept) => DampedSubspace {
            dimension: 1 << (n - kept.len()),
            generators: kept,
        },
        None => DampedSubspace {
            generators: generators.to_vec(),
            dimension: 0,
        },
    };
    for &q in qubits {
        if s.dimension == 0 {
            break;
        }
        s = damped_subspace(&s.generators, q)?;
    }
    Ok(s)
}
