//! Hermitian Pauli operators as bit-packed symplectic vectors with a sign.
//! A qubit with both bits set carries Y.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::anyon::Phase;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub const fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

pub const fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Exponent of i (mod 4) picked up by multiplying single-qubit Paulis
/// word-wise, `a` on the left.
#[inline]
pub fn product_phase_words(ax: &[u64], az: &[u64], bx: &[u64], bz: &[u64]) -> u32 {
    let mut plus = 0u32;
    let mut minus = 0u32;
    for i in 0..ax.len() {
        let (x1, z1, x2, z2) = (ax[i], az[i], bx[i], bz[i]);
        let a_x = x1 & !z1;
        let a_z = !x1 & z1;
        let a_y = x1 & z1;
        let b_x = x2 & !z2;
        let b_z = !x2 & z2;
        let b_y = x2 & z2;
        // XY = iZ, YZ = iX, ZX = iY and the reverse orders give -i.
        plus += ((a_x & b_y) | (a_y & b_z) | (a_z & b_x)).count_ones();
        minus += ((a_x & b_z) | (a_y & b_x) | (a_z & b_y)).count_ones();
    }
    (plus + 3 * minus) % 4
}

/// Parity of the symplectic product.
#[inline]
pub fn anticommute_words(ax: &[u64], az: &[u64], bx: &[u64], bz: &[u64]) -> bool {
    let mut acc = 0u64;
    for i in 0..ax.len() {
        acc ^= (ax[i] & bz[i]) ^ (az[i] & bx[i]);
    }
    acc.count_ones() % 2 == 1
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    minus: bool,
}

impl PauliOperator {
    pub fn identity(n: usize) -> PauliOperator {
        let w = words_for(n);
        PauliOperator {
            n,
            x: vec![0; w],
            z: vec![0; w],
            minus: false,
        }
    }

    /// Product of single-qubit Paulis; repeated qubits are rejected.
    pub fn from_sparse(n: usize, terms: &[(usize, Pauli)]) -> Result<PauliOperator> {
        let mut op = PauliOperator::identity(n);
        for &(q, p) in terms {
            if q >= n {
                return Err(Error::Operator(format!("qubit {q} out of range for {n} qubits")));
            }
            if op.get(q) != Pauli::I {
                return Err(Error::Operator(format!("qubit {q} listed twice")));
            }
            op.set(q, p);
        }
        Ok(op)
    }

    /// Same Pauli on every listed qubit.
    pub fn uniform(n: usize, qubits: &[usize], p: Pauli) -> Result<PauliOperator> {
        let terms: Vec<(usize, Pauli)> = qubits.iter().map(|&q| (q, p)).collect();
        PauliOperator::from_sparse(n, &terms)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn sign(&self) -> Phase {
        if self.minus {
            Phase::Minus
        } else {
            Phase::Plus
        }
    }

    pub fn set_sign(&mut self, s: Phase) {
        self.minus = s == Phase::Minus;
    }

    pub fn negated(&self) -> PauliOperator {
        let mut out = self.clone();
        out.minus = !out.minus;
        out
    }

    pub fn get(&self, q: usize) -> Pauli {
        let (w, b) = (q / 64, q % 64);
        Pauli::from_bits(self.x[w] >> b & 1 == 1, self.z[w] >> b & 1 == 1)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let (w, b) = (q / 64, 1u64 << (q % 64));
        let (x, z) = p.bits();
        self.x[w] = (self.x[w] & !b) | if x { b } else { 0 };
        self.z[w] = (self.z[w] & !b) | if z { b } else { 0 };
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(x, z)| (x | z).count_ones() as usize).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Qubits with a non-identity factor, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, (x, z)) in self.x.iter().zip(&self.z).enumerate() {
            let mut m = x | z;
            while m != 0 {
                out.push(w * 64 + m.trailing_zeros() as usize);
                m &= m - 1;
            }
        }
        out
    }

    pub fn anticommutes(&self, other: &PauliOperator) -> bool {
        assert_eq!(self.n, other.n, "operators act on different qubit counts");
        anticommute_words(&self.x, &self.z, &other.x, &other.z)
    }

    pub fn commutes(&self, other: &PauliOperator) -> bool {
        !self.anticommutes(other)
    }

    /// `self <- self * other` for commuting operators.
    pub fn mul_assign(&mut self, other: &PauliOperator) -> Result<()> {
        if self.anticommutes(other) {
            return Err(Error::Operator("product of anticommuting Paulis is not Hermitian".into()));
        }
        let e = product_phase_words(&self.x, &self.z, &other.x, &other.z);
        debug_assert!(e.is_multiple_of(2));
        self.minus ^= other.minus ^ (e == 2);
        for i in 0..self.x.len() {
            self.x[i] ^= other.x[i];
            self.z[i] ^= other.z[i];
        }
        Ok(())
    }

    pub fn mul(&self, other: &PauliOperator) -> Result<PauliOperator> {
        let mut out = self.clone();
        out.mul_assign(other)?;
        Ok(out)
    }

    /// Equal up to sign.
    pub fn same_support_and_type(&self, other: &PauliOperator) -> bool {
        self.x == other.x && self.z == other.z
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.minus { "-" } else { "+" })?;
        for q in 0..self.n {
            write!(f, "{}", self.get(q).letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.minus { "-" } else { "+" })?;
        let terms: Vec<String> = self
            .support()
            .into_iter()
            .map(|q| format!("{}{q}", self.get(q).letter()))
            .collect();
        write!(f, "[{}]", terms.join(" "))
    }
}

impl std::str::FromStr for PauliOperator {
    type Err = Error;

    /// Dense form such as `+XIZY` or `-ZZ`; the sign is optional.
    fn from_str(s: &str) -> Result<PauliOperator> {
        let t = s.trim();
        let (minus, body) = match t.chars().next() {
            Some('-') => (true, &t[1..]),
            Some('+') => (false, &t[1..]),
            _ => (false, t),
        };
        let mut op = PauliOperator::identity(body.chars().count());
        for (q, c) in body.chars().enumerate() {
            let p = match c {
                'I' | '_' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(Error::Parse(format!("invalid Pauli letter `{c}`"))),
            };
            op.set(q, p);
        }
        op.minus = minus;
        Ok(op)
    }
}
