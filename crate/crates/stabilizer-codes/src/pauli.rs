use std::fmt;

use qer_linalg::{Complex, Matrix, Real};

use crate::StabilizerError;

/// `i^phase · σ_1 ⊗ … ⊗ σ_n` with `σ_(x,z) ∈ {I, X, Z, Y}` (`(1,1)` is `Y`).
///
/// Qubit 1 (index 0) is the most significant bit of `x_bits`/`z_bits` and of
/// basis-state indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

pub const MAX_QUBITS: usize = 64;

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Power of `i` picked up by `σ_(x1,z1) σ_(x2,z2)` on one qubit.
fn phase_exponent(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

impl PauliOperator {
    pub fn new(n: usize, x_bits: u64, z_bits: u64, phase: u8) -> Result<Self, StabilizerError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(StabilizerError::Invalid(format!("{n} qubits")));
        }
        if (x_bits | z_bits) & !mask(n) != 0 {
            return Err(StabilizerError::Invalid(format!("bits beyond {n} qubits")));
        }
        Ok(Self {
            n,
            x: x_bits,
            z: z_bits,
            phase: phase % 4,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, 0, 0, 0).expect("valid qubit count")
    }

    fn bit(&self, qubit: usize) -> u64 {
        1u64 << (self.n - 1 - qubit)
    }

    /// Single-qubit Pauli `label` on `qubit` (0-based) of an `n`-qubit register.
    pub fn single(n: usize, qubit: usize, label: char) -> Result<Self, StabilizerError> {
        if qubit >= n {
            return Err(StabilizerError::Invalid(format!("qubit {qubit} of {n}")));
        }
        let mut p = Self::identity(n);
        p.set(qubit, label)?;
        Ok(p)
    }

    fn set(&mut self, qubit: usize, label: char) -> Result<(), StabilizerError> {
        let b = self.bit(qubit);
        let (x, z) = match label {
            'I' => (false, false),
            'X' => (true, false),
            'Y' => (true, true),
            'Z' => (false, true),
            _ => return Err(StabilizerError::Parse(format!("unknown Pauli '{label}'"))),
        };
        self.x = if x { self.x | b } else { self.x & !b };
        self.z = if z { self.z | b } else { self.z & !b };
        Ok(())
    }

    /// Parses strings such as `XZZXI`, `-ZZII`, `+iXY` or `-iZ`.
    pub fn parse(s: &str) -> Result<Self, StabilizerError> {
        let s = s.trim();
        let (phase, body) = if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix('i') {
            (1, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else {
            (0, s)
        };
        let n = body.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(StabilizerError::Parse(format!("'{s}' has {n} qubits")));
        }
        let mut p = Self::identity(n);
        p.phase = phase;
        for (q, c) in body.chars().enumerate() {
            p.set(q, c).map_err(|_| StabilizerError::Parse(format!("malformed Pauli string '{s}'")))?;
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn label(&self, qubit: usize) -> char {
        let b = self.bit(qubit);
        match (self.x & b != 0, self.z & b != 0) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    /// The operator without its phase.
    pub fn unsigned(&self) -> Self {
        Self { phase: 0, ..*self }
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        Self {
            phase: phase % 4,
            ..*self
        }
    }

    pub fn negate(&self) -> Self {
        self.with_phase(self.phase + 2)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// ±1 for Hermitian operators.
    pub fn sign(&self) -> i8 {
        match self.phase {
            0 => 1,
            2 => -1,
            _ => 0,
        }
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn commutes(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Product `self · other` with phase tracking.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "Pauli operators on different registers");
        let mut e = self.phase as i32 + other.phase as i32;
        for q in 0..self.n {
            let b = self.bit(q);
            e += phase_exponent(self.x & b != 0, self.z & b != 0, other.x & b != 0, other.z & b != 0);
        }
        Self {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: e.rem_euclid(4) as u8,
        }
    }

    pub fn adjoint(&self) -> Self {
        self.with_phase((4 - self.phase) % 4)
    }

    /// Symplectic vector `(x | z)` packed as `x << 64 | z`.
    pub fn symplectic(&self) -> u128 {
        ((self.x as u128) << 64) | self.z as u128
    }

    pub fn from_symplectic(n: usize, v: u128, phase: u8) -> Self {
        Self::new(n, (v >> 64) as u64, v as u64, phase).expect("bits within register")
    }

    /// Coefficient `c` with `P|b⟩ = c·|b ⊕ x⟩`.
    pub fn coefficient<T: Real>(&self, b: usize) -> Complex<T> {
        let e = (self.phase as u32 + (self.x & self.z).count_ones() + 2 * (self.z & b as u64).count_ones()) % 4;
        let (o, z) = (T::one(), T::zero());
        match e {
            0 => Complex::new(o, z),
            1 => Complex::new(z, o),
            2 => Complex::new(-o, z),
            _ => Complex::new(z, -o),
        }
    }

    /// Dense `2^n × 2^n` matrix.
    pub fn to_matrix<T: Real>(&self) -> Matrix<T> {
        let d = 1usize << self.n;
        let mut m = Matrix::zeros(d, d);
        for b in 0..d {
            m[(b ^ self.x as usize, b)] = self.coefficient(b);
        }
        m
    }

    /// `P · m` for a matrix with `2^n` rows.
    pub fn apply<T: Real>(&self, m: &Matrix<T>) -> Matrix<T> {
        let d = 1usize << self.n;
        assert_eq!(m.rows(), d, "row count must be 2^n");
        let mut out = Matrix::zeros(d, m.cols());
        for b in 0..d {
            let c = self.coefficient::<T>(b);
            let t = b ^ self.x as usize;
            for j in 0..m.cols() {
                out[(t, j)] = c * m[(b, j)];
            }
        }
        out
    }

    /// `P · v` for a vector of length `2^n`.
    pub fn apply_vector<T: Real>(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); v.len()];
        for (b, a) in v.iter().enumerate() {
            out[b ^ self.x as usize] = self.coefficient::<T>(b) * a;
        }
        out
    }

    /// All `3^w · C(n, w)` phase-free Paulis of weight `w`, sorted by `(x_bits, z_bits)`.
    pub fn all_of_weight(n: usize, w: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut support = Vec::with_capacity(w);
        fn rec(n: usize, w: usize, start: usize, support: &mut Vec<usize>, out: &mut Vec<PauliOperator>) {
            if support.len() == w {
                let k = support.len();
                for code in 0..3usize.pow(k as u32) {
                    let mut p = PauliOperator::identity(n);
                    let mut c = code;
                    for &q in support.iter() {
                        p.set(q, ['X', 'Y', 'Z'][c % 3]).expect("valid label");
                        c /= 3;
                    }
                    out.push(p);
                }
                return;
            }
            for q in start..n {
                support.push(q);
                rec(n, w, q + 1, support, out);
                support.pop();
            }
        }
        rec(n, w, 0, &mut support, &mut out);
        out.sort_by_key(|p| (p.x, p.z));
        out
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}")?;
        for q in 0..self.n {
            write!(f, "{}", self.label(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl std::ops::Mul for PauliOperator {
    type Output = PauliOperator;

    fn mul(self, rhs: Self) -> Self {
        PauliOperator::mul(&self, &rhs)
    }
}

impl std::str::FromStr for PauliOperator {
    type Err = StabilizerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}
