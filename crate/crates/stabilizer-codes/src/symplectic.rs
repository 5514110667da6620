//! GF(2) linear algebra on packed symplectic vectors.

use crate::PauliOperator;

/// Symplectic form `x1·z2 + z1·x2 (mod 2)` on packed vectors.
pub fn symplectic_product(a: u128, b: u128) -> bool {
    let swapped = b.rotate_left(64);
    (a & swapped).count_ones() % 2 == 1
}

/// Rank over GF(2) of a list of packed vectors.
pub fn gf2_rank(vectors: &[u128]) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for &v in vectors {
        if let Some(r) = reduce(v, &basis) {
            basis.push(r);
        }
    }
    basis.len()
}

/// Reduces `v` against an echelon basis (each element has a distinct leading bit);
/// returns the nonzero remainder, if any.
fn reduce(mut v: u128, basis: &[u128]) -> Option<u128> {
    for &b in basis {
        let lead = 127 - b.leading_zeros();
        if v >> lead & 1 == 1 {
            v ^= b;
        }
    }
    (v != 0).then_some(v)
}

/// Echelon basis of the span, kept sorted by decreasing leading bit.
fn echelon(vectors: &[u128]) -> Vec<u128> {
    let mut basis: Vec<u128> = Vec::new();
    for &v in vectors {
        if let Some(r) = reduce(v, &basis) {
            basis.push(r);
            basis.sort_by_key(|b| std::cmp::Reverse(127 - b.leading_zeros()));
            let lead = 127 - r.leading_zeros();
            for b in basis.iter_mut() {
                if *b != r && *b >> lead & 1 == 1 {
                    *b ^= r;
                }
            }
        }
    }
    basis
}

pub fn in_span(v: u128, vectors: &[u128]) -> bool {
    v == 0 || reduce(v, &echelon(vectors)).is_none()
}

/// Basis of `{v : ω(v, g) = 0 for all g}` inside `GF(2)^{2n}`.
pub fn symplectic_complement(generators: &[u128], n: usize) -> Vec<u128> {
    let full: Vec<u128> = (0..n)
        .flat_map(|q| [1u128 << (64 + q), 1u128 << q])
        .collect();
    // Solve linear constraints by Gaussian elimination on the coordinate basis.
    let mut space = full;
    for &g in generators {
        let pivot = space.iter().position(|&v| symplectic_product(v, g));
        if let Some(p) = pivot {
            let pv = space.remove(p);
            for v in space.iter_mut() {
                if symplectic_product(*v, g) {
                    *v ^= pv;
                }
            }
        }
    }
    space
}

/// Logical operators `(X̄_j, Z̄_j)` for the code stabilized by `generators`,
/// found by symplectic Gram-Schmidt on the normalizer.
pub fn find_logicals(generators: &[PauliOperator]) -> (Vec<PauliOperator>, Vec<PauliOperator>) {
    let n = generators[0].n();
    let gens: Vec<u128> = generators.iter().map(PauliOperator::symplectic).collect();
    let mut pool = symplectic_complement(&gens, n);
    let mut xs = Vec::new();
    let mut zs = Vec::new();
    loop {
        let mut pair = None;
        'search: for i in 0..pool.len() {
            for j in 0..pool.len() {
                if i != j && symplectic_product(pool[i], pool[j]) {
                    pair = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = pair else { break };
        let (a, b) = (pool[i], pool[j]);
        pool = pool
            .into_iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, v)| {
                let mut w = v;
                if symplectic_product(v, b) {
                    w ^= a;
                }
                if symplectic_product(v, a) {
                    w ^= b;
                }
                w
            })
            .collect();
        zs.push(PauliOperator::from_symplectic(n, a, 0));
        xs.push(PauliOperator::from_symplectic(n, b, 0));
    }
    (xs, zs)
}
