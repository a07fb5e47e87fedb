//! Pauli operators in the binary symplectic representation.
//!
//! Bit i of `x_bits`/`z_bits` addresses qubit i (0-indexed). Phases are never
//! tracked: products and gate conjugations act on the (x, z) masks only.

use std::fmt;

use crate::{Error, Result};

/// Maximum register width supported by the mask representation.
pub const MAX_QUBITS: u32 = 64;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    /// The (x, z) bit pair for this letter.
    pub fn bits(self) -> (u64, u64) {
        match self {
            Letter::I => (0, 0),
            Letter::X => (1, 0),
            Letter::Y => (1, 1),
            Letter::Z => (0, 1),
        }
    }

    pub fn from_bits(x: u64, z: u64) -> Self {
        match (x & 1, z & 1) {
            (0, 0) => Letter::I,
            (1, 0) => Letter::X,
            (1, 1) => Letter::Y,
            _ => Letter::Z,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// n-qubit Pauli operator as X/Z bit masks, phase-free.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliOp {
    pub n: u32,
    pub x_bits: u64,
    pub z_bits: u64,
}

fn mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliOp {
    pub fn identity(n: u32) -> Result<Self> {
        Self::new(n, 0, 0)
    }

    pub fn new(n: u32, x_bits: u64, z_bits: u64) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidArgument {
                field: "n",
                msg: format!("qubit count must be in 1..={MAX_QUBITS}, got {n}"),
            });
        }
        if x_bits & !mask(n) != 0 || z_bits & !mask(n) != 0 {
            return Err(Error::InvalidArgument {
                field: "bits",
                msg: format!("mask bits set beyond qubit {n}"),
            });
        }
        Ok(PauliOp { n, x_bits, z_bits })
    }

    /// Single-letter operator acting on `qubit` (0-indexed).
    pub fn single(n: u32, qubit: u32, letter: Letter) -> Result<Self> {
        if qubit >= n {
            return Err(Error::InvalidArgument {
                field: "qubit",
                msg: format!("qubit {qubit} out of range for n={n}"),
            });
        }
        let (x, z) = letter.bits();
        Self::new(n, x << qubit, z << qubit)
    }

    /// Parse a letter string such as "XIZY"; index 0 is qubit 0.
    pub fn from_letters(s: &str) -> Result<Self> {
        let n = s.chars().count() as u32;
        let mut x = 0u64;
        let mut z = 0u64;
        for (i, c) in s.chars().enumerate() {
            let letter = match c.to_ascii_uppercase() {
                'I' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                other => {
                    return Err(Error::InvalidArgument {
                        field: "letters",
                        msg: format!("unknown Pauli letter `{other}`"),
                    })
                }
            };
            let (xb, zb) = letter.bits();
            x |= xb << i;
            z |= zb << i;
        }
        Self::new(n, x, z)
    }

    pub fn letter(&self, qubit: u32) -> Letter {
        Letter::from_bits(self.x_bits >> qubit, self.z_bits >> qubit)
    }

    pub fn is_identity(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0
    }

    /// Number of non-identity tensor factors.
    pub fn weight(&self) -> u32 {
        (self.x_bits | self.z_bits).count_ones()
    }

    /// Symplectic inner product: 0 if the operators commute, 1 otherwise.
    pub fn sym_product(&self, other: &PauliOp) -> u8 {
        debug_assert_eq!(self.n, other.n);
        let overlap = (self.x_bits & other.z_bits).count_ones()
            + (self.z_bits & other.x_bits).count_ones();
        (overlap & 1) as u8
    }

    pub fn commutes(&self, other: &PauliOp) -> bool {
        self.sym_product(other) == 0
    }

    /// Phase-free product (XOR of masks).
    pub fn mul(&self, other: &PauliOp) -> PauliOp {
        debug_assert_eq!(self.n, other.n);
        PauliOp {
            n: self.n,
            x_bits: self.x_bits ^ other.x_bits,
            z_bits: self.z_bits ^ other.z_bits,
        }
    }

    /// Reverse the qubit order (qubit i <-> qubit n-1-i).
    pub fn mirrored(&self) -> PauliOp {
        PauliOp {
            n: self.n,
            x_bits: reverse_bits(self.x_bits, self.n),
            z_bits: reverse_bits(self.z_bits, self.n),
        }
    }

    fn bit(v: u64, i: u32) -> u64 {
        (v >> i) & 1
    }

    /// Conjugate by CX with control `c` and target `t`.
    pub fn apply_cx(&mut self, c: u32, t: u32) {
        let xc = Self::bit(self.x_bits, c);
        let zt = Self::bit(self.z_bits, t);
        self.x_bits ^= xc << t;
        self.z_bits ^= zt << c;
    }

    /// Conjugate by CZ on qubits `a` and `b` (symmetric).
    pub fn apply_cz(&mut self, a: u32, b: u32) {
        let xa = Self::bit(self.x_bits, a);
        let xb = Self::bit(self.x_bits, b);
        self.z_bits ^= xa << b;
        self.z_bits ^= xb << a;
    }

    /// Conjugate by CY with control `c` and target `t`.
    pub fn apply_cy(&mut self, c: u32, t: u32) {
        let xc = Self::bit(self.x_bits, c);
        let xt = Self::bit(self.x_bits, t);
        let zt = Self::bit(self.z_bits, t);
        self.x_bits ^= xc << t;
        self.z_bits ^= xc << t;
        self.z_bits ^= (zt ^ xt) << c;
    }

    /// Conjugate by Hadamard on qubit `a` (swaps the X and Z components).
    pub fn apply_h(&mut self, a: u32) {
        let xa = Self::bit(self.x_bits, a);
        let za = Self::bit(self.z_bits, a);
        self.x_bits ^= (xa ^ za) << a;
        self.z_bits ^= (xa ^ za) << a;
    }

    /// Conjugate by the phase gate on qubit `a` (X picks up a Z component).
    pub fn apply_s(&mut self, a: u32) {
        let xa = Self::bit(self.x_bits, a);
        self.z_bits ^= xa << a;
    }
}

/// Reverse the low `n` bits of `v`.
pub fn reverse_bits(v: u64, n: u32) -> u64 {
    let mut out = 0u64;
    for i in 0..n {
        out |= ((v >> i) & 1) << (n - 1 - i);
    }
    out
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "{}", self.letter(i).to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp({})", self)
    }
}
