use crate::symplectic::{find_logicals, gf2_rank, in_span};
use crate::{PauliOperator, StabilizerError};

/// `[n, k]` stabilizer code with signed generators and logical operators.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerCode {
    pub name: String,
    n: usize,
    k: usize,
    generators: Vec<PauliOperator>,
    logical_x: Vec<PauliOperator>,
    logical_z: Vec<PauliOperator>,
}

impl StabilizerCode {
    /// Validates commutation, independence and the logical operator relations.
    pub fn new(
        name: impl Into<String>,
        generators: Vec<PauliOperator>,
        logical_x: Vec<PauliOperator>,
        logical_z: Vec<PauliOperator>,
    ) -> Result<Self, StabilizerError> {
        let first = generators
            .first()
            .ok_or_else(|| StabilizerError::Invalid("no generators".into()))?;
        let n = first.n();
        let all = generators.iter().chain(&logical_x).chain(&logical_z);
        if all.clone().any(|p| p.n() != n) {
            return Err(StabilizerError::Invalid("operators on different registers".into()));
        }
        if all.clone().any(|p| !p.is_hermitian()) {
            return Err(StabilizerError::Invalid("non-Hermitian operator".into()));
        }
        for (i, a) in generators.iter().enumerate() {
            if a.is_identity() {
                return Err(StabilizerError::Invalid(format!("generator {a} is a multiple of I")));
            }
            for b in &generators[i + 1..] {
                if !a.commutes(b) {
                    return Err(StabilizerError::Invalid(format!("{a} and {b} anticommute")));
                }
            }
        }
        let vecs: Vec<u128> = generators.iter().map(PauliOperator::symplectic).collect();
        if gf2_rank(&vecs) != generators.len() {
            return Err(StabilizerError::Invalid("dependent generators".into()));
        }
        let k = n - generators.len();
        if logical_x.len() != k || logical_z.len() != k {
            return Err(StabilizerError::Invalid(format!(
                "{} X and {} Z logicals for k = {k}",
                logical_x.len(),
                logical_z.len()
            )));
        }
        for l in logical_x.iter().chain(&logical_z) {
            if let Some(g) = generators.iter().find(|g| !g.commutes(l)) {
                return Err(StabilizerError::Invalid(format!("logical {l} anticommutes with {g}")));
            }
            if in_span(l.symplectic(), &vecs) {
                return Err(StabilizerError::Invalid(format!("logical {l} is a stabilizer")));
            }
        }
        for i in 0..k {
            for j in 0..k {
                let should_anticommute = i == j;
                if logical_x[i].commutes(&logical_z[j]) == should_anticommute {
                    return Err(StabilizerError::Invalid(format!(
                        "X{} and Z{} have the wrong commutation",
                        i + 1,
                        j + 1
                    )));
                }
                if !logical_x[i].commutes(&logical_x[j]) || !logical_z[i].commutes(&logical_z[j]) {
                    return Err(StabilizerError::Invalid("logicals of one type must commute".into()));
                }
            }
        }
        Ok(Self {
            name: name.into(),
            n,
            k,
            generators,
            logical_x,
            logical_z,
        })
    }

    /// Code whose logical operators are derived by symplectic Gram-Schmidt.
    pub fn with_derived_logicals(name: impl Into<String>, generators: Vec<PauliOperator>) -> Result<Self, StabilizerError> {
        if generators.is_empty() {
            return Err(StabilizerError::Invalid("no generators".into()));
        }
        let (xs, zs) = find_logicals(&generators);
        Self::new(name, generators, xs, zs)
    }

    /// Parses generator and logical strings.
    pub fn from_strings(name: &str, generators: &[&str], logical_x: &[&str], logical_z: &[&str]) -> Result<Self, StabilizerError> {
        let parse = |v: &[&str]| v.iter().map(|s| PauliOperator::parse(s)).collect::<Result<Vec<_>, _>>();
        Self::new(name, parse(generators)?, parse(logical_x)?, parse(logical_z)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `2^k`
    pub fn d_s(&self) -> usize {
        1 << self.k
    }

    /// `2^n`
    pub fn d_c(&self) -> usize {
        1 << self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn logical_x(&self) -> &[PauliOperator] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliOperator] {
        &self.logical_z
    }

    pub fn num_syndromes(&self) -> usize {
        1 << self.generators.len()
    }

    /// Bit `i` is set iff `e` anticommutes with generator `i`.
    pub fn syndrome(&self, e: &PauliOperator) -> Vec<bool> {
        self.generators.iter().map(|g| !g.commutes(e)).collect()
    }

    /// Syndrome as an integer with generator 1 as the most significant bit.
    pub fn syndrome_index(&self, e: &PauliOperator) -> usize {
        self.syndrome(e).iter().fold(0, |acc, &b| acc << 1 | b as usize)
    }

    /// Logical class of an element of the normalizer: bit `j` of the X part
    /// is set when `e` anticommutes with `Z̄_j`, bit `j` of the Z part when it
    /// anticommutes with `X̄_j`. Packed as `x_part << k | z_part`, qubit 1 first.
    pub fn logical_class(&self, e: &PauliOperator) -> usize {
        let k = self.k;
        let mut xp = 0usize;
        let mut zp = 0usize;
        for j in 0..k {
            xp = xp << 1 | !self.logical_z[j].commutes(e) as usize;
            zp = zp << 1 | !self.logical_x[j].commutes(e) as usize;
        }
        xp << k | zp
    }

    /// Representative `Π X̄_j^{x_j} Π Z̄_j^{z_j}` of a logical class index.
    pub fn logical_operator(&self, class: usize) -> PauliOperator {
        let k = self.k;
        let xp = class >> k;
        let zp = class & ((1 << k) - 1);
        let mut p = PauliOperator::identity(self.n);
        for j in 0..k {
            if xp >> (k - 1 - j) & 1 == 1 {
                p = p * self.logical_x[j];
            }
            if zp >> (k - 1 - j) & 1 == 1 {
                p = p * self.logical_z[j];
            }
        }
        p
    }

    /// Whether `e` commutes with every generator.
    pub fn in_normalizer(&self, e: &PauliOperator) -> bool {
        self.generators.iter().all(|g| g.commutes(e))
    }
}
