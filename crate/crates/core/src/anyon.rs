//! Anyons of the color code as elements of the fusion group Z2^4.
//!
//! An anyon is stored as a 4-bit exponent vector over the generators
//! `rx, rz, gx, gz` (bit 0 to bit 3). Fusion is XOR. Braiding and topological
//! spin are looked up in tables built at compile time from the magic-square
//! rule: two bosons braid trivially iff they share a color or a flavor.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Row of the magic square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    R,
    G,
    B,
}

/// Column of the magic square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Flavor {
    X,
    Y,
    Z,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::R, Color::G, Color::B];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn from_index(i: usize) -> Color {
        match i {
            0 => Color::R,
            1 => Color::G,
            _ => Color::B,
        }
    }

    pub const fn letter(self) -> char {
        match self {
            Color::R => 'r',
            Color::G => 'g',
            Color::B => 'b',
        }
    }

    pub fn from_letter(c: char) -> Option<Color> {
        match c {
            'r' => Some(Color::R),
            'g' => Some(Color::G),
            'b' => Some(Color::B),
            _ => None,
        }
    }
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::X, Flavor::Y, Flavor::Z];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn from_index(i: usize) -> Flavor {
        match i {
            0 => Flavor::X,
            1 => Flavor::Y,
            _ => Flavor::Z,
        }
    }

    pub const fn letter(self) -> char {
        match self {
            Flavor::X => 'x',
            Flavor::Y => 'y',
            Flavor::Z => 'z',
        }
    }

    pub fn from_letter(c: char) -> Option<Flavor> {
        match c {
            'x' => Some(Flavor::X),
            'y' => Some(Flavor::Y),
            'z' => Some(Flavor::Z),
            _ => None,
        }
    }
}

/// Braiding phase or topological spin, both valued in {+1, -1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    Plus,
    Minus,
}

impl Phase {
    pub const fn from_bit(bit: u8) -> Phase {
        if bit & 1 == 0 {
            Phase::Plus
        } else {
            Phase::Minus
        }
    }

    pub const fn sign(self) -> i8 {
        match self {
            Phase::Plus => 1,
            Phase::Minus => -1,
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        if self == rhs {
            Phase::Plus
        } else {
            Phase::Minus
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    Vacuum,
    Boson,
    Fermion,
}

/// The two three-element fermion groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FermionGroup {
    /// Rows of the fermion magic square.
    F,
    /// Columns of the fermion magic square.
    FPrime,
}

impl fmt::Display for FermionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FermionGroup::F => write!(f, "F"),
            FermionGroup::FPrime => write!(f, "F'"),
        }
    }
}

/// An anyon of the color code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Anyon(u8);

const fn boson_bits(c: usize, f: usize) -> u8 {
    // x-part and z-part of color c; b = r * g.
    let x = match c {
        0 => 0b0001,
        1 => 0b0100,
        _ => 0b0101,
    };
    let z = match c {
        0 => 0b0010,
        1 => 0b1000,
        _ => 0b1010,
    };
    match f {
        0 => x,
        1 => x ^ z,
        _ => z,
    }
}

const fn form_bit(a: u8, b: u8) -> u8 {
    let (a0, a1, a2, a3) = (a & 1, (a >> 1) & 1, (a >> 2) & 1, (a >> 3) & 1);
    let (b0, b1, b2, b3) = (b & 1, (b >> 1) & 1, (b >> 2) & 1, (b >> 3) & 1);
    (a0 & b3) ^ (a3 & b0) ^ (a1 & b2) ^ (a2 & b1)
}

const fn quadratic_bit(a: u8) -> u8 {
    ((a & 1) & ((a >> 3) & 1)) ^ (((a >> 1) & 1) & ((a >> 2) & 1))
}

const fn build_braid_table() -> [u16; 16] {
    let mut t = [0u16; 16];
    let mut a = 0;
    while a < 16 {
        let mut b = 0;
        while b < 16 {
            if form_bit(a as u8, b as u8) == 1 {
                t[a] |= 1 << b;
            }
            b += 1;
        }
        a += 1;
    }
    t
}

const fn build_spin_table() -> [u8; 16] {
    let mut t = [0u8; 16];
    let mut a = 0;
    while a < 16 {
        t[a] = quadratic_bit(a as u8);
        a += 1;
    }
    t
}

/// Row `a` has bit `b` set iff B(a, b) = -1.
const BRAID: [u16; 16] = build_braid_table();
/// Entry `a` is 1 iff a is a fermion.
const SPIN: [u8; 16] = build_spin_table();

impl Anyon {
    pub const VACUUM: Anyon = Anyon(0);
    pub const RX: Anyon = Anyon::boson(Color::R, Flavor::X);
    pub const RY: Anyon = Anyon::boson(Color::R, Flavor::Y);
    pub const RZ: Anyon = Anyon::boson(Color::R, Flavor::Z);
    pub const GX: Anyon = Anyon::boson(Color::G, Flavor::X);
    pub const GY: Anyon = Anyon::boson(Color::G, Flavor::Y);
    pub const GZ: Anyon = Anyon::boson(Color::G, Flavor::Z);
    pub const BX: Anyon = Anyon::boson(Color::B, Flavor::X);
    pub const BY: Anyon = Anyon::boson(Color::B, Flavor::Y);
    pub const BZ: Anyon = Anyon::boson(Color::B, Flavor::Z);

    /// Bosons in magic-square reading order rx, ry, rz, gx, ..., bz.
    pub const BOSONS: [Anyon; 9] = [
        Anyon::RX,
        Anyon::RY,
        Anyon::RZ,
        Anyon::GX,
        Anyon::GY,
        Anyon::GZ,
        Anyon::BX,
        Anyon::BY,
        Anyon::BZ,
    ];

    pub const fn boson(c: Color, f: Flavor) -> Anyon {
        Anyon(boson_bits(c.index(), f.index()))
    }

    pub const fn from_bits(bits: u8) -> Anyon {
        Anyon(bits & 0xF)
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    /// All 16 anyons in bit order.
    pub fn all() -> impl Iterator<Item = Anyon> {
        (0u8..16).map(Anyon)
    }

    pub const fn fuse(self, other: Anyon) -> Anyon {
        Anyon(self.0 ^ other.0)
    }

    pub const fn is_vacuum(self) -> bool {
        self.0 == 0
    }

    pub const fn braid(self, other: Anyon) -> Phase {
        Phase::from_bit(((BRAID[self.0 as usize] >> other.0) & 1) as u8)
    }

    /// True iff B(self, other) = -1.
    pub const fn is_semion_with(self, other: Anyon) -> bool {
        (BRAID[self.0 as usize] >> other.0) & 1 == 1
    }

    pub const fn theta(self) -> Phase {
        Phase::from_bit(SPIN[self.0 as usize])
    }

    pub const fn spin(self) -> Spin {
        if self.0 == 0 {
            Spin::Vacuum
        } else if SPIN[self.0 as usize] == 1 {
            Spin::Fermion
        } else {
            Spin::Boson
        }
    }

    /// Color and flavor of a nontrivial boson.
    pub fn as_boson(self) -> Option<(Color, Flavor)> {
        Color::ALL.iter().find_map(|&c| {
            Flavor::ALL
                .iter()
                .find(|&&f| Anyon::boson(c, f) == self)
                .map(|&f| (c, f))
        })
    }

    pub fn fermion_group(self) -> Result<FermionGroup, Error> {
        if FERMIONS_F.contains(&self) {
            Ok(FermionGroup::F)
        } else if FERMIONS_F_PRIME.contains(&self) {
            Ok(FermionGroup::FPrime)
        } else {
            Err(Error::NotAFermion(self.to_string()))
        }
    }

    /// Canonical spelling: `1`, a boson label, or the first boson pair in
    /// magic-square order fusing to the anyon.
    fn name(self) -> String {
        if self.is_vacuum() {
            return "1".to_string();
        }
        if let Some((c, f)) = self.as_boson() {
            return format!("{}{}", c.letter(), f.letter());
        }
        for (i, a) in Anyon::BOSONS.iter().enumerate() {
            for b in &Anyon::BOSONS[i + 1..] {
                if a.fuse(*b) == self {
                    return format!("{}*{}", a, b);
                }
            }
        }
        unreachable!("every anyon is a boson or a product of two bosons")
    }
}

impl std::ops::Mul for Anyon {
    type Output = Anyon;
    fn mul(self, rhs: Anyon) -> Anyon {
        self.fuse(rhs)
    }
}

const fn fuse3(a: Anyon, b: Anyon, c: Anyon) -> Anyon {
    a.fuse(b).fuse(c)
}

/// Fermions of group F, one per row of the fermion magic square.
pub const FERMIONS_F: [Anyon; 3] = [
    fuse3(Anyon::RY, Anyon::BX, Anyon::GZ),
    fuse3(Anyon::BZ, Anyon::GY, Anyon::RX),
    fuse3(Anyon::GX, Anyon::RZ, Anyon::BY),
];

/// Fermions of group F', one per column of the fermion magic square.
pub const FERMIONS_F_PRIME: [Anyon; 3] = [
    fuse3(Anyon::RY, Anyon::BZ, Anyon::GX),
    fuse3(Anyon::BX, Anyon::GY, Anyon::RZ),
    fuse3(Anyon::GZ, Anyon::RX, Anyon::BY),
];

impl fmt::Display for Anyon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Anyon {
    type Err = Error;

    /// Accepts `1`, a boson label, or a product such as `rx*gz`, `rx×gz`.
    fn from_str(s: &str) -> Result<Anyon, Error> {
        let bad = || Error::Parse(format!("invalid anyon `{s}`"));
        let mut acc = Anyon::VACUUM;
        let mut any = false;
        for tok in s.split(['*', '×']) {
            let tok = tok.trim();
            if tok.is_empty() {
                return Err(bad());
            }
            any = true;
            if tok == "1" {
                continue;
            }
            let mut chars = tok.chars();
            let c = chars.next().and_then(Color::from_letter).ok_or_else(bad)?;
            let f = chars.next().and_then(Flavor::from_letter).ok_or_else(bad)?;
            if chars.next().is_some() {
                return Err(bad());
            }
            acc = acc.fuse(Anyon::boson(c, f));
        }
        if any {
            Ok(acc)
        } else {
            Err(bad())
        }
    }
}

impl Serialize for Anyon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Anyon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Anyon, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
