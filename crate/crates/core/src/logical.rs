//! Logical algebra of the interlayer-condensed color code on a torus.
//!
//! Four logical qubits are carried by the strings of rx, rz, bx and bz along
//! the vertical (v) and horizontal (h) cycles:
//! X1 = rx_v, Z1 = bz_h, X2 = bx_v, Z2 = rz_h,
//! X3 = bx_h, Z3 = rz_v, X4 = rx_h, Z4 = bz_v.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::anyon::Anyon;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "v")]
    V,
    #[serde(rename = "h")]
    H,
}

impl Direction {
    pub fn other(self) -> Direction {
        match self {
            Direction::V => Direction::H,
            Direction::H => Direction::V,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::V => "v",
            Direction::H => "h",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Direction> {
        match s.trim() {
            "v" => Ok(Direction::V),
            "h" => Ok(Direction::H),
            _ => Err(Error::Parse(format!("invalid direction `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LogicalKind {
    X,
    Z,
}

/// One of X1..X4, Z1..Z4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LogicalFactor {
    pub qubit: u8,
    pub kind: LogicalKind,
}

impl LogicalFactor {
    pub const fn new(kind: LogicalKind, qubit: u8) -> LogicalFactor {
        LogicalFactor { qubit, kind }
    }

    /// The anyon string representing this logical.
    pub fn string(self) -> (Anyon, Direction) {
        use Direction::*;
        use LogicalKind::*;
        match (self.kind, self.qubit) {
            (X, 1) => (Anyon::RX, V),
            (Z, 1) => (Anyon::BZ, H),
            (X, 2) => (Anyon::BX, V),
            (Z, 2) => (Anyon::RZ, H),
            (X, 3) => (Anyon::BX, H),
            (Z, 3) => (Anyon::RZ, V),
            (X, 4) => (Anyon::RX, H),
            (Z, 4) => (Anyon::BZ, V),
            _ => panic!("logical qubit index {} out of range", self.qubit),
        }
    }

    pub fn all() -> impl Iterator<Item = LogicalFactor> {
        (1..=4).flat_map(|q| [LogicalFactor::new(LogicalKind::X, q), LogicalFactor::new(LogicalKind::Z, q)])
    }
}

impl fmt::Display for LogicalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            LogicalKind::X => 'X',
            LogicalKind::Z => 'Z',
        };
        write!(f, "{k}{}", self.qubit)
    }
}

/// Exponents of rx, rz, bx, bz in an anyon.
pub fn decompose(a: Anyon) -> [bool; 4] {
    let bits = a.bits();
    let bx = bits & 0b0100 != 0;
    let bz = bits & 0b1000 != 0;
    let rx = (bits & 0b0001 != 0) ^ bx;
    let rz = (bits & 0b0010 != 0) ^ bz;
    [rx, rz, bx, bz]
}

/// The logical product represented by the string of `a` along `d`, in
/// qubit order.
pub fn expansion(a: Anyon, d: Direction) -> Vec<LogicalFactor> {
    let [rx, rz, bx, bz] = decompose(a);
    let mut out: Vec<LogicalFactor> = LogicalFactor::all()
        .filter(|f| {
            let (g, dir) = f.string();
            dir == d
                && match g {
                    Anyon::RX => rx,
                    Anyon::RZ => rz,
                    Anyon::BX => bx,
                    Anyon::BZ => bz,
                    _ => false,
                }
        })
        .collect();
    out.sort();
    out
}

/// Formats a logical product, e.g. `X1Z4`.
pub fn format_product(factors: &[LogicalFactor]) -> String {
    if factors.is_empty() {
        return "1".into();
    }
    factors.iter().map(|f| f.to_string()).collect()
}

/// Strings along different cycles anticommute iff their anyons braid with
/// -1; strings along the same cycle commute.
pub fn strings_anticommute(a: (Anyon, Direction), b: (Anyon, Direction)) -> bool {
    a.1 != b.1 && a.0.is_semion_with(b.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_algebra_is_four_qubits() {
        for a in LogicalFactor::all() {
            for b in LogicalFactor::all() {
                let expected = a.qubit == b.qubit && a.kind != b.kind;
                assert_eq!(strings_anticommute(a.string(), b.string()), expected, "{a} {b}");
            }
        }
    }

    #[test]
    fn expansion_examples() {
        let rxbz = Anyon::RX.fuse(Anyon::BZ);
        assert_eq!(format_product(&expansion(rxbz, Direction::V)), "X1Z4");
        let rzby = Anyon::RZ.fuse(Anyon::BY);
        assert_eq!(format_product(&expansion(rzby, Direction::H)), "Z1Z2X3");
        assert_eq!(format_product(&expansion(Anyon::VACUUM, Direction::H)), "1");
    }
}
