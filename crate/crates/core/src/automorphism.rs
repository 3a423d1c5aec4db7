//! The 72-element automorphism group of the color code.
//!
//! An automorphism permutes the six labels `r g b x y z` so that colors go
//! to colors and flavors to flavors, or colors to flavors and flavors to
//! colors. It acts on bosons label-wise and on the remaining anyons through
//! fusion.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::anyon::{Anyon, Color, Flavor};
use crate::error::Error;

const LETTERS: [char; 6] = ['r', 'g', 'b', 'x', 'y', 'z'];

fn label_of(c: char) -> Option<u8> {
    LETTERS.iter().position(|&l| l == c).map(|i| i as u8)
}

/// A valid permutation of `r g b x y z`; `map[i]` is the image of label `i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Automorphism {
    map: [u8; 6],
}

/// Conjugacy classes, in the order of the reference table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassId {
    Identity,
    Reflection,
    DoubleRotation,
    DoubleTransposition,
    SixCycle,
    Rotation,
    Transposition,
    FourTwo,
    RotationTransposition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

/// Tabulated metadata of a conjugacy class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassInfo {
    pub label: &'static str,
    pub cycle_type: &'static str,
    pub example: &'static str,
    pub parity: Parity,
    pub log2_d2: u32,
    pub ims: u32,
    pub size: usize,
}

impl ClassId {
    pub const ALL: [ClassId; 9] = [
        ClassId::Identity,
        ClassId::Reflection,
        ClassId::DoubleRotation,
        ClassId::DoubleTransposition,
        ClassId::SixCycle,
        ClassId::Rotation,
        ClassId::Transposition,
        ClassId::FourTwo,
        ClassId::RotationTransposition,
    ];

    pub const fn info(self) -> ClassInfo {
        use Parity::*;
        let (label, cycle_type, example, parity, log2_d2, ims, size) = match self {
            ClassId::Identity => ("id", "[1^6]", "id", Even, 0, 4, 1),
            ClassId::Reflection => ("(cσ)(cσ)(cσ)", "[2^3]", "(rx)(gy)(bz)", Even, 1, 2, 6),
            ClassId::DoubleRotation => ("(ccc)(σσσ)", "[3^2]", "(rgb)(xyz)", Even, 2, 2, 4),
            ClassId::DoubleTransposition => ("(cc)(σσ)", "[1^2 2^2]", "(rg)(xy)", Even, 2, 0, 9),
            ClassId::SixCycle => ("(cσcσcσ)", "[6]", "(rxgybz)", Even, 3, 0, 12),
            ClassId::Rotation => ("(ccc)", "[1^3 3]", "(rgb)", Even, 4, 0, 4),
            ClassId::Transposition => ("(cc)", "[1^4 2]", "(rg)", Odd, 2, 0, 6),
            ClassId::FourTwo => ("(cσcσ)(cσ)", "[2 4]", "(rxgy)(bz)", Odd, 3, 0, 18),
            ClassId::RotationTransposition => ("(ccc)(σσ)", "[1 2 3]", "(rgb)(xy)", Odd, 4, 0, 12),
        };
        ClassInfo {
            label,
            cycle_type,
            example,
            parity,
            log2_d2,
            ims,
            size,
        }
    }

    fn from_cycle_lengths(lengths: &[usize]) -> ClassId {
        match lengths {
            [1, 1, 1, 1, 1, 1] => ClassId::Identity,
            [2, 2, 2] => ClassId::Reflection,
            [3, 3] => ClassId::DoubleRotation,
            [1, 1, 2, 2] => ClassId::DoubleTransposition,
            [6] => ClassId::SixCycle,
            [1, 1, 1, 3] => ClassId::Rotation,
            [1, 1, 1, 1, 2] => ClassId::Transposition,
            [2, 4] => ClassId::FourTwo,
            [1, 2, 3] => ClassId::RotationTransposition,
            _ => unreachable!("cycle type {lengths:?} does not occur in the group"),
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{{{}}}", self.info().label)
    }
}

impl Automorphism {
    pub const IDENTITY: Automorphism = Automorphism {
        map: [0, 1, 2, 3, 4, 5],
    };

    /// Builds an automorphism from an image table, checking validity.
    pub fn from_map(map: [u8; 6]) -> Result<Automorphism, Error> {
        let mut seen = [false; 6];
        for &m in &map {
            if m > 5 || seen[m as usize] {
                return Err(Error::InvalidAutomorphism(format!("{map:?} is not a permutation")));
            }
            seen[m as usize] = true;
        }
        let colors_to_colors = map[..3].iter().all(|&m| m < 3);
        let colors_to_flavors = map[..3].iter().all(|&m| m >= 3);
        if !(colors_to_colors || colors_to_flavors) {
            let a = Automorphism { map };
            return Err(Error::InvalidAutomorphism(format!(
                "{} mixes colors and flavors",
                a.cycle_string()
            )));
        }
        Ok(Automorphism { map })
    }

    pub fn map(&self) -> [u8; 6] {
        self.map
    }

    /// All 72 automorphisms, ordered by image table.
    pub fn all() -> Vec<Automorphism> {
        let mut out = Vec::with_capacity(72);
        let mut perm = [0u8, 1, 2, 3, 4, 5];
        permutations(&mut perm, 0, &mut |p| {
            if let Ok(a) = Automorphism::from_map(*p) {
                out.push(a);
            }
        });
        out.sort();
        out
    }

    /// True iff colors are exchanged with flavors.
    pub fn swaps_colors_and_flavors(&self) -> bool {
        self.map[0] >= 3
    }

    pub fn compose(self, first: Automorphism) -> Automorphism {
        let mut map = [0u8; 6];
        for (i, m) in map.iter_mut().enumerate() {
            *m = self.map[first.map[i] as usize];
        }
        Automorphism { map }
    }

    pub fn inverse(self) -> Automorphism {
        let mut map = [0u8; 6];
        for i in 0..6 {
            map[self.map[i] as usize] = i as u8;
        }
        Automorphism { map }
    }

    pub fn image_boson(&self, c: Color, f: Flavor) -> Anyon {
        let i = self.map[c.index()];
        let j = self.map[3 + f.index()];
        if i < 3 {
            Anyon::boson(Color::from_index(i as usize), Flavor::from_index(j as usize - 3))
        } else {
            Anyon::boson(Color::from_index(j as usize), Flavor::from_index(i as usize - 3))
        }
    }

    pub fn apply(&self, a: Anyon) -> Anyon {
        let gens = [
            self.image_boson(Color::R, Flavor::X),
            self.image_boson(Color::R, Flavor::Z),
            self.image_boson(Color::G, Flavor::X),
            self.image_boson(Color::G, Flavor::Z),
        ];
        let mut out = Anyon::VACUUM;
        for (k, g) in gens.iter().enumerate() {
            if (a.bits() >> k) & 1 == 1 {
                out = out.fuse(*g);
            }
        }
        out
    }

    /// Disjoint cycles (length >= 2), each starting at its smallest label,
    /// sorted by that label.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let mut seen = [false; 6];
        let mut out = Vec::new();
        for start in 0..6u8 {
            if seen[start as usize] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start as usize] = true;
            let mut cur = self.map[start as usize];
            while cur != start {
                seen[cur as usize] = true;
                cycle.push(cur);
                cur = self.map[cur as usize];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Sorted cycle lengths including fixed points.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lengths.iter().sum();
        lengths.extend(std::iter::repeat_n(1, 6 - moved));
        lengths.sort_unstable();
        lengths
    }

    pub fn cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "id".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let body: String = c.iter().map(|&i| LETTERS[i as usize]).collect();
                format!("({body})")
            })
            .collect()
    }

    pub fn class(&self) -> ClassId {
        ClassId::from_cycle_lengths(&self.cycle_lengths())
    }

    /// Parity of the S3 x S3 component: exchange-type elements are first
    /// composed with (rx)(gy)(bz).
    pub fn s3s3_parity(&self) -> Parity {
        let base = if self.swaps_colors_and_flavors() {
            swap_reflection().compose(*self)
        } else {
            *self
        };
        let transpositions: usize = base.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Anyons c = b x tau(b) over all b.
    pub fn localized_anyons(&self) -> BTreeSet<Anyon> {
        Anyon::all().map(|b| b.fuse(self.apply(b))).collect()
    }

    pub fn invariant_anyons(&self) -> Vec<Anyon> {
        Anyon::all().filter(|&b| self.apply(b) == b).collect()
    }

    /// Invariant mutual-semion pairs chosen by symplectic Gram-Schmidt over
    /// the invariant subgroup, scanning candidates in the order
    /// rx, bz, rz, bx, then remaining bosons, then fermions.
    pub fn invariant_mutual_semion_pairs(&self) -> Vec<(Anyon, Anyon)> {
        let invariant: BTreeSet<Anyon> = self.invariant_anyons().into_iter().collect();
        let order = candidate_order();
        let mut chosen: Vec<Anyon> = Vec::new();
        let mut pairs = Vec::new();
        loop {
            let pool: Vec<Anyon> = order
                .iter()
                .copied()
                .filter(|a| invariant.contains(a))
                .filter(|a| chosen.iter().all(|c| !a.is_semion_with(*c)))
                .collect();
            let next = pool.iter().find_map(|&a| {
                pool.iter()
                    .find(|&&b| a.is_semion_with(b))
                    .map(|&b| (a, b))
            });
            match next {
                Some((a, b)) => {
                    chosen.push(a);
                    chosen.push(b);
                    pairs.push((a, b));
                }
                None => return pairs,
            }
        }
    }

    /// Checks that b is invariant iff b braids trivially with every
    /// localized anyon.
    pub fn lemma1_check(&self) -> Lemma1Report {
        let localized = self.localized_anyons();
        let counterexamples: Vec<Anyon> = Anyon::all()
            .filter(|&b| {
                let invariant = self.apply(b) == b;
                let transparent = localized.iter().all(|c| !b.is_semion_with(*c));
                invariant != transparent
            })
            .collect();
        Lemma1Report {
            pass: counterexamples.is_empty(),
            counterexamples,
        }
    }

    /// The three (c sigma) transpositions of an element of the reflection
    /// class, as (color, flavor) label pairs.
    pub fn mirror_transpositions(&self) -> Option<[(u8, u8); 3]> {
        if self.class() != ClassId::Reflection {
            return None;
        }
        let c = self.cycles();
        Some([(c[0][0], c[0][1]), (c[1][0], c[1][1]), (c[2][0], c[2][1])])
    }
}

/// Outcome of [`Automorphism::lemma1_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma1Report {
    pub pass: bool,
    pub counterexamples: Vec<Anyon>,
}

/// (rx)(gy)(bz).
pub fn swap_reflection() -> Automorphism {
    Automorphism {
        map: [3, 4, 5, 0, 1, 2],
    }
}

/// (rz)(gy)(bx).
pub fn antiswap_reflection() -> Automorphism {
    Automorphism {
        map: [5, 4, 3, 2, 1, 0],
    }
}

/// tau_BA = phi_B phi_A^{-1}.
pub fn transition_map(phi_a: Automorphism, phi_b: Automorphism) -> Automorphism {
    phi_b.compose(phi_a.inverse())
}

/// Two reflections have parallel mirror lines iff they share no
/// transposition.
pub fn parallel_mirrors(a: &Automorphism, b: &Automorphism) -> Option<bool> {
    let ta = a.mirror_transpositions()?;
    let tb = b.mirror_transpositions()?;
    Some(ta.iter().all(|t| !tb.contains(t)))
}

fn candidate_order() -> Vec<Anyon> {
    let mut order = vec![Anyon::RX, Anyon::BZ, Anyon::RZ, Anyon::BX];
    for b in Anyon::BOSONS {
        if !order.contains(&b) {
            order.push(b);
        }
    }
    for a in Anyon::all() {
        if !a.is_vacuum() && !order.contains(&a) {
            order.push(a);
        }
    }
    order
}

fn permutations(p: &mut [u8; 6], k: usize, f: &mut impl FnMut(&[u8; 6])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_string())
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_string())
    }
}

impl FromStr for Automorphism {
    type Err = Error;

    /// Parses disjoint cycle notation such as `(rx)(gy)(bz)` or `id`.
    fn from_str(s: &str) -> Result<Automorphism, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |why: &str| Error::Parse(format!("invalid automorphism `{s}`: {why}"));
        if compact == "id" || compact.is_empty() || compact == "()" {
            return if compact.is_empty() {
                Err(bad("empty"))
            } else {
                Ok(Automorphism::IDENTITY)
            };
        }
        let mut map = [0u8, 1, 2, 3, 4, 5];
        let mut used = [false; 6];
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| bad("expected `(...)`"))?;
            let labels: Vec<u8> = body
                .0
                .chars()
                .map(|c| label_of(c).ok_or_else(|| bad("unknown label")))
                .collect::<Result<_, _>>()?;
            for &l in &labels {
                if used[l as usize] {
                    return Err(bad("cycles are not disjoint"));
                }
                used[l as usize] = true;
            }
            for (i, &l) in labels.iter().enumerate() {
                map[l as usize] = labels[(i + 1) % labels.len()];
            }
            rest = body.1;
        }
        Automorphism::from_map(map)
    }
}

impl Serialize for Automorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.cycle_string())
    }
}

impl<'de> Deserialize<'de> for Automorphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Automorphism, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
