//! Mixed-state stabilizer simulation.
//!
//! Rows form a symplectic basis: stabilizer generators paired with
//! destabilizers, and logical pairs for the remaining n - rank qubits.
//! Besides the row-major bits the tableau keeps, for every qubit, bitsets
//! over rows of which rows carry X and which carry Z there. The rows
//! anticommuting with a Pauli are then the XOR of a few columns over its
//! support. Destabilizers live in the columns only; retired rows are
//! zeroed in batches and reused.

use rand::Rng;

use crate::anyon::Phase;
use crate::error::{Error, Result};
use crate::pauli::{anticommute_words, product_phase_words, words_for, PauliOperator};

/// Result of a projective measurement; the phase is the eigenvalue of the
/// measured operator including its own sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Random(Phase),
    /// `None` when the untracked path skipped the sign computation.
    Deterministic(Option<Phase>),
}

impl Outcome {
    pub fn is_random(self) -> bool {
        matches!(self, Outcome::Random(_))
    }

    pub fn phase(self) -> Option<Phase> {
        match self {
            Outcome::Random(p) => Some(p),
            Outcome::Deterministic(p) => p,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// The operator with its sign times this phase is in the group.
    InGroup(Phase),
    CommutesNotInSpan,
    Anticommutes,
}

/// Common interface of stabilizer simulators.
pub trait StabilizerBackend {
    fn num_qubits(&self) -> usize;

    fn rank(&self) -> usize;

    fn entropy(&self) -> usize {
        self.num_qubits() - self.rank()
    }

    /// Measures `p`, drawing one bool from `rng` per random outcome
    /// (`true` gives -1).
    fn measure<R: Rng + ?Sized>(&mut self, p: &PauliOperator, rng: &mut R) -> Outcome;

    /// As `measure`, but may leave deterministic outcomes unresolved.
    fn measure_untracked<R: Rng + ?Sized>(&mut self, p: &PauliOperator, rng: &mut R) -> Outcome {
        self.measure(p, rng)
    }

    /// Measures `p` and projects onto the `want` eigenspace.
    fn measure_postselect(&mut self, p: &PauliOperator, want: Phase) -> Result<()>;

    fn contains(&self, p: &PauliOperator) -> Membership;

    /// Square of the expectation value, which is 0 or 1 for stabilizer states.
    fn expectation_squared(&self, p: &PauliOperator) -> u8 {
        matches!(self.contains(p), Membership::InGroup(_)) as u8
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Stabilizer,
    Destabilizer,
    Logical,
    Free,
}

#[derive(Clone, Debug)]
pub struct StabilizerTableau {
    n: usize,
    /// Words per row half.
    w: usize,
    /// Words per bitset over rows.
    rw: usize,
    /// Row-major bits, x at [2wr, 2wr + w) and z after. Kept current for
    /// stabilizer and logical rows only.
    bits: Vec<u64>,
    /// Weights of stabilizer and logical rows.
    wt: Vec<u32>,
    /// Signs, meaningful for stabilizer rows.
    minus: Vec<bool>,
    kind: Vec<Kind>,
    /// The anticommuting partner of every row.
    partner: Vec<usize>,
    /// Column bitsets over rows for all rows: word k of qubit q is x at
    /// 2(q rw + k) and z right after.
    cols: Vec<u64>,
    stab_mask: Vec<u64>,
    destab_mask: Vec<u64>,
    logical_mask: Vec<u64>,
    /// Zeroed rows ready for reuse.
    free: Vec<usize>,
    /// Retired rows still holding bits.
    garbage: Vec<u64>,
    rank: usize,
    relocalize: Option<u32>,
    scratch: Vec<u64>,
    pivot_buf: Vec<u64>,
    row_buf: Vec<u64>,
    word_buf: Vec<usize>,
}

#[inline]
fn bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
fn flip(words: &mut [u64], i: usize) {
    words[i / 64] ^= 1 << (i % 64);
}

fn for_each_bit(words: &[u64], mut f: impl FnMut(usize)) {
    for (k, &w) in words.iter().enumerate() {
        let mut m = w;
        while m != 0 {
            f(k * 64 + m.trailing_zeros() as usize);
            m &= m - 1;
        }
    }
}

fn weight(x: &[u64], z: &[u64]) -> u32 {
    x.iter().zip(z).map(|(a, b)| (a | b).count_ones()).sum()
}

fn for_each_support(x: &[u64], z: &[u64], mut f: impl FnMut(usize, bool, bool)) {
    for (k, (&xw, &zw)) in x.iter().zip(z).enumerate() {
        let mut m = xw | zw;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            f(k * 64 + b, xw >> b & 1 == 1, zw >> b & 1 == 1);
        }
    }
}

/// How a measurement changed the group.
enum Projection {
    Random(Phase),
    /// Eigenvalue of the measured operator, if it was asked for.
    Deterministic(Option<Phase>),
}

impl StabilizerTableau {
    /// Maximally mixed state on `n` qubits: no stabilizers, logical pairs
    /// (X_q, Z_q).
    pub fn new(n: usize) -> StabilizerTableau {
        let w = words_for(n);
        let rows = 2 * n + n.max(64);
        let rw = words_for(rows);
        let mut t = StabilizerTableau {
            n,
            w,
            rw,
            bits: vec![0; rows * 2 * w],
            wt: vec![0; rows],
            minus: vec![false; rows],
            kind: vec![Kind::Free; rows],
            partner: vec![0; rows],
            cols: vec![0; 2 * n * rw],
            stab_mask: vec![0; rw],
            destab_mask: vec![0; rw],
            logical_mask: vec![0; rw],
            free: (2 * n..rows).rev().collect(),
            garbage: vec![0; rw],
            rank: 0,
            relocalize: Some(32),
            scratch: vec![0; rw],
            pivot_buf: vec![0; 2 * w],
            row_buf: vec![0; 2 * w],
            word_buf: Vec::with_capacity(rw),
        };
        for q in 0..n {
            let (rx, rz) = (2 * q, 2 * q + 1);
            flip(&mut t.bits[rx * 2 * w..rx * 2 * w + w], q);
            flip(&mut t.bits[rz * 2 * w + w..(rz + 1) * 2 * w], q);
            let (cx, cz) = (t.col(rx / 64, q), t.col(rz / 64, q) + 1);
            t.cols[cx] ^= 1 << (rx % 64);
            t.cols[cz] ^= 1 << (rz % 64);
            t.wt[rx] = 1;
            t.wt[rz] = 1;
            t.set_kind(rx, Kind::Logical, rz);
            t.set_kind(rz, Kind::Logical, rx);
        }
        t
    }

    /// A deterministic measurement replaces the heaviest generator it is a
    /// product of when that generator outweighs it by more than `margin`.
    /// `None` turns this off; the default margin is 32.
    pub fn set_relocalize(&mut self, margin: Option<u32>) {
        self.relocalize = margin;
    }

    /// Index of the x word of qubit `q`, row word `k`, in `cols`.
    #[inline]
    fn col(&self, k: usize, q: usize) -> usize {
        2 * (q * self.rw + k)
    }

    fn row(&self, r: usize) -> (&[u64], &[u64]) {
        debug_assert!(self.kind[r] != Kind::Destabilizer);
        let s = &self.bits[r * 2 * self.w..(r + 1) * 2 * self.w];
        s.split_at(self.w)
    }

    /// Reads row `r` from the columns into `out` (x then z).
    fn gather_row(&self, r: usize, out: &mut [u64]) {
        out.fill(0);
        let (k, b) = (r / 64, r % 64);
        let (ox, oz) = out.split_at_mut(self.w);
        for q in 0..self.n {
            let c = self.col(k, q);
            ox[q / 64] |= (self.cols[c] >> b & 1) << (q % 64);
            oz[q / 64] |= (self.cols[c + 1] >> b & 1) << (q % 64);
        }
    }

    fn row_weight(&self, r: usize) -> u32 {
        debug_assert_eq!(self.wt[r], weight(self.row(r).0, self.row(r).1));
        self.wt[r]
    }

    fn row_operator(&self, r: usize) -> PauliOperator {
        let (x, z) = self.row(r);
        let mut op = PauliOperator::identity(self.n);
        for_each_support(x, z, |q, xb, zb| op.set(q, crate::pauli::Pauli::from_bits(xb, zb)));
        if self.minus[r] {
            op = op.negated();
        }
        op
    }

    /// Current stabilizer generators.
    pub fn stabilizers(&self) -> Vec<PauliOperator> {
        let mut out = Vec::with_capacity(self.rank);
        for_each_bit(&self.stab_mask, |r| out.push(self.row_operator(r)));
        out
    }

    /// Current logical basis as anticommuting pairs.
    pub fn logical_pairs(&self) -> Vec<(PauliOperator, PauliOperator)> {
        let mut out = Vec::new();
        for_each_bit(&self.logical_mask, |r| {
            if r < self.partner[r] {
                out.push((self.row_operator(r), self.row_operator(self.partner[r])));
            }
        });
        out
    }

    /// Mean and maximum stabilizer weight.
    pub fn stabilizer_weights(&self) -> (f64, u32) {
        let (mut sum, mut max) = (0u64, 0u32);
        for_each_bit(&self.stab_mask, |r| {
            let w = self.row_weight(r);
            sum += w as u64;
            max = max.max(w);
        });
        (sum as f64 / self.rank.max(1) as f64, max)
    }

    /// Live rows anticommuting with `p`, written into `out`.
    fn anticommuting_rows(&self, p: &PauliOperator, out: &mut [u64]) {
        out.fill(0);
        for_each_support(p.x_words(), p.z_words(), |q, xb, zb| {
            for (k, o) in out.iter_mut().enumerate() {
                let c = self.col(k, q);
                if zb {
                    *o ^= self.cols[c];
                }
                if xb {
                    *o ^= self.cols[c + 1];
                }
            }
        });
        for (k, o) in out.iter_mut().enumerate() {
            *o &= !self.garbage[k];
        }
    }

    fn masked_min_weight(&self, mask: &[u64], set: &[u64]) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        for k in 0..self.rw {
            let mut m = mask[k] & set[k];
            while m != 0 {
                let r = k * 64 + m.trailing_zeros() as usize;
                m &= m - 1;
                let wgt = self.row_weight(r);
                if best.is_none_or(|(bw, _)| wgt < bw) {
                    best = Some((wgt, r));
                }
            }
        }
        best.map(|(_, r)| r)
    }

    /// Multiplies the row in `pivot_buf` (with sign `pminus`) into every
    /// row of `targets` from the right.
    fn multiply_into(&mut self, pminus: bool, targets: &[u64]) {
        let w = self.w;
        let piv = std::mem::take(&mut self.pivot_buf);
        let (px, pz) = piv.split_at(w);
        let mut words = std::mem::take(&mut self.word_buf);
        words.clear();
        words.extend((0..w).filter(|&i| px[i] | pz[i] != 0));
        for k in 0..self.rw {
            let mut m = targets[k] & !self.destab_mask[k];
            while m != 0 {
                let r = k * 64 + m.trailing_zeros() as usize;
                m &= m - 1;
                let row = &mut self.bits[r * 2 * w..(r + 1) * 2 * w];
                let (rx, rz) = row.split_at_mut(w);
                let (mut e, mut before, mut after) = (0, 0, 0);
                for &i in &words {
                    e += product_phase_words(&rx[i..=i], &rz[i..=i], &px[i..=i], &pz[i..=i]);
                    before += (rx[i] | rz[i]).count_ones();
                    rx[i] ^= px[i];
                    rz[i] ^= pz[i];
                    after += (rx[i] | rz[i]).count_ones();
                }
                if self.kind[r] == Kind::Stabilizer {
                    self.minus[r] ^= pminus ^ (e % 4 == 2);
                }
                self.wt[r] = self.wt[r] + after - before;
            }
        }
        words.clear();
        words.extend((0..self.rw).filter(|&k| targets[k] != 0));
        let rw = self.rw;
        let cols = &mut self.cols;
        for_each_support(px, pz, |q, xb, zb| {
            for &k in &words {
                let c = 2 * (q * rw + k);
                if xb {
                    cols[c] ^= targets[k];
                }
                if zb {
                    cols[c + 1] ^= targets[k];
                }
            }
        });
        self.word_buf = words;
        self.pivot_buf = piv;
    }

    /// Loads row `r` into `pivot_buf`.
    fn load_pivot(&mut self, r: usize) {
        let mut buf = std::mem::take(&mut self.pivot_buf);
        if self.kind[r] == Kind::Destabilizer {
            self.gather_row(r, &mut buf);
        } else {
            buf.copy_from_slice(&self.bits[r * 2 * self.w..(r + 1) * 2 * self.w]);
        }
        self.pivot_buf = buf;
    }

    /// Overwrites row `r` with the given bits.
    fn write_row(&mut self, r: usize, x: &[u64], z: &[u64], minus: bool) {
        let w = self.w;
        let mut old = std::mem::take(&mut self.row_buf);
        if self.kind[r] == Kind::Destabilizer {
            self.gather_row(r, &mut old);
        } else {
            old.copy_from_slice(&self.bits[r * 2 * w..(r + 1) * 2 * w]);
        }
        let (k, b) = (r / 64, r % 64);
        for i in 0..w {
            let mut dx = old[i] ^ x[i];
            while dx != 0 {
                let q = i * 64 + dx.trailing_zeros() as usize;
                dx &= dx - 1;
                let c = self.col(k, q);
                self.cols[c] ^= 1 << b;
            }
            let mut dz = old[w + i] ^ z[i];
            while dz != 0 {
                let q = i * 64 + dz.trailing_zeros() as usize;
                dz &= dz - 1;
                let c = self.col(k, q);
                self.cols[c + 1] ^= 1 << b;
            }
        }
        self.bits[r * 2 * w..r * 2 * w + w].copy_from_slice(x);
        self.bits[r * 2 * w + w..(r + 1) * 2 * w].copy_from_slice(z);
        self.minus[r] = minus;
        self.wt[r] = weight(x, z);
        self.row_buf = old;
    }

    /// Takes a zeroed row, cleaning retired rows first if none is left.
    fn fresh_row(&mut self, x: &[u64], z: &[u64], minus: bool) -> usize {
        if self.free.is_empty() {
            self.collect_garbage();
        }
        let r = self.free.pop().expect("retired rows were collected");
        let (w, k, b) = (self.w, r / 64, r % 64);
        let (rw, cols) = (self.rw, &mut self.cols);
        for_each_support(x, z, |q, xb, zb| {
            let c = 2 * (q * rw + k);
            cols[c] |= (xb as u64) << b;
            cols[c + 1] |= (zb as u64) << b;
        });
        self.bits[r * 2 * w..r * 2 * w + w].copy_from_slice(x);
        self.bits[r * 2 * w + w..(r + 1) * 2 * w].copy_from_slice(z);
        self.minus[r] = minus;
        self.wt[r] = weight(x, z);
        r
    }

    fn retire(&mut self, r: usize) {
        self.set_kind(r, Kind::Free, r);
        flip(&mut self.garbage, r);
    }

    fn collect_garbage(&mut self) {
        let keep: Vec<u64> = self.garbage.iter().flat_map(|g| [!g, !g]).collect();
        for col in self.cols.chunks_exact_mut(keep.len()) {
            col.iter_mut().zip(&keep).for_each(|(c, k)| *c &= k);
        }
        for_each_bit(&self.garbage, |r| self.free.push(r));
        self.garbage.fill(0);
    }

    fn set_kind(&mut self, r: usize, kind: Kind, partner: usize) {
        for k in [self.kind[r], kind] {
            let mask = match k {
                Kind::Stabilizer => &mut self.stab_mask,
                Kind::Destabilizer => &mut self.destab_mask,
                Kind::Logical => &mut self.logical_mask,
                Kind::Free => continue,
            };
            flip(mask, r);
        }
        self.kind[r] = kind;
        self.partner[r] = partner;
    }

    /// The heaviest stabilizer paired with a destabilizer in `mask`.
    fn heaviest_factor(&self, mask: &[u64]) -> Option<(usize, u32)> {
        let mut heaviest: Option<(usize, u32)> = None;
        for_each_bit(mask, |d| {
            let s = self.partner[d];
            if heaviest.is_none_or(|(_, hw)| self.wt[s] > hw) {
                heaviest = Some((s, self.wt[s]));
            }
        });
        heaviest
    }

    /// Sign of `p` relative to the product of the stabilizers paired with
    /// the destabilizers in `mask`.
    fn expansion_sign(&self, p: &PauliOperator, mask: &[u64]) -> Phase {
        let w = self.w;
        let mut acc = vec![0u64; 2 * w];
        let mut e = 0;
        let mut minus = false;
        for_each_bit(mask, |d| {
            let s = self.partner[d];
            let (sx, sz) = self.row(s);
            let (ax, az) = acc.split_at_mut(w);
            for i in (0..w).filter(|&i| sx[i] | sz[i] != 0) {
                e += product_phase_words(&ax[i..=i], &az[i..=i], &sx[i..=i], &sz[i..=i]);
                ax[i] ^= sx[i];
                az[i] ^= sz[i];
            }
            minus ^= self.minus[s];
        });
        debug_assert!(acc[..w] == *p.x_words() && acc[w..] == *p.z_words(), "operator is not in the group");
        if minus ^ (e % 4 == 2) == (p.sign() == Phase::Minus) {
            Phase::Plus
        } else {
            Phase::Minus
        }
    }

    /// Updates the group for a measurement of `p`; `sign` picks the
    /// outcome when it is random. Deterministic outcomes are resolved when
    /// `track` is set.
    fn project(&mut self, p: &PauliOperator, track: bool, sign: impl FnOnce() -> Phase) -> Projection {
        assert_eq!(p.num_qubits(), self.n, "operator acts on the wrong number of qubits");
        let mut anti = std::mem::take(&mut self.scratch);
        self.anticommuting_rows(p, &mut anti);
        let result = if let Some(s) = self.masked_min_weight(&anti, &self.stab_mask) {
            let d = self.partner[s];
            flip(&mut anti, s);
            if bit(&anti, d) {
                flip(&mut anti, d);
            }
            self.load_pivot(s);
            self.multiply_into(self.minus[s], &anti);
            // The old generator becomes the destabilizer of p.
            let out = sign();
            let minus = (out == Phase::Minus) ^ (p.sign() == Phase::Minus);
            let f = self.fresh_row(p.x_words(), p.z_words(), minus);
            self.retire(d);
            self.set_kind(s, Kind::Destabilizer, f);
            self.set_kind(f, Kind::Stabilizer, s);
            Projection::Random(out)
        } else if let Some(ell) = self.masked_min_weight(&anti, &self.logical_mask) {
            let bar = self.partner[ell];
            flip(&mut anti, ell);
            if bit(&anti, bar) {
                flip(&mut anti, bar);
            }
            self.load_pivot(ell);
            self.multiply_into(false, &anti);
            let out = sign();
            let minus = (out == Phase::Minus) ^ (p.sign() == Phase::Minus);
            self.write_row(bar, p.x_words(), p.z_words(), minus);
            self.set_kind(bar, Kind::Stabilizer, ell);
            self.set_kind(ell, Kind::Destabilizer, bar);
            self.rank += 1;
            Projection::Random(out)
        } else {
            let mut out = track.then(|| self.expansion_sign(p, &anti));
            if let Some((j, wj)) = self.heaviest_factor(&anti) {
                if self.relocalize.is_some_and(|m| wj > p.weight() as u32 + m) {
                    // p times the other factors is s_j: swap p in and keep
                    // the destabilizers dual.
                    let sign = *out.get_or_insert_with(|| self.expansion_sign(p, &anti));
                    let dj = self.partner[j];
                    let minus = (sign == Phase::Minus) ^ (p.sign() == Phase::Minus);
                    self.write_row(j, p.x_words(), p.z_words(), minus);
                    flip(&mut anti, dj);
                    self.load_pivot(dj);
                    self.multiply_into(false, &anti);
                }
            }
            Projection::Deterministic(out)
        };
        self.scratch = anti;
        result
    }

    fn anticommutes_with_any(&self, p: &PauliOperator, mask: &[u64]) -> bool {
        let mut found = false;
        for_each_bit(mask, |r| {
            if !found {
                let (x, z) = self.row(r);
                found = anticommute_words(x, z, p.x_words(), p.z_words());
            }
        });
        found
    }
}

impl StabilizerBackend for StabilizerTableau {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn measure<R: Rng + ?Sized>(&mut self, p: &PauliOperator, rng: &mut R) -> Outcome {
        match self.project(p, true, || Phase::from_bit(rng.gen::<bool>() as u8)) {
            Projection::Random(s) => Outcome::Random(s),
            Projection::Deterministic(s) => Outcome::Deterministic(s),
        }
    }

    fn measure_untracked<R: Rng + ?Sized>(&mut self, p: &PauliOperator, rng: &mut R) -> Outcome {
        match self.project(p, false, || Phase::from_bit(rng.gen::<bool>() as u8)) {
            Projection::Random(s) => Outcome::Random(s),
            Projection::Deterministic(s) => Outcome::Deterministic(s),
        }
    }

    fn measure_postselect(&mut self, p: &PauliOperator, want: Phase) -> Result<()> {
        match self.project(p, true, || want) {
            Projection::Deterministic(Some(s)) if s != want => {
                Err(Error::Postselection(format!("{p:?} is fixed to the other eigenvalue")))
            }
            _ => Ok(()),
        }
    }

    fn contains(&self, p: &PauliOperator) -> Membership {
        let mut anti = vec![0u64; self.rw];
        self.anticommuting_rows(p, &mut anti);
        let hits = |mask: &[u64]| anti.iter().zip(mask).any(|(a, m)| a & m != 0);
        if hits(&self.stab_mask) {
            Membership::Anticommutes
        } else if hits(&self.logical_mask) {
            Membership::CommutesNotInSpan
        } else {
            Membership::InGroup(self.expansion_sign(p, &anti))
        }
    }

    fn expectation_squared(&self, p: &PauliOperator) -> u8 {
        let any = self.anticommutes_with_any(p, &self.stab_mask) || self.anticommutes_with_any(p, &self.logical_mask);
        (!any) as u8
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn textbook_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut t = StabilizerTableau::new(1);
        assert_eq!(t.entropy(), 1);
        assert!(t.measure(&p("X"), &mut rng).is_random());
        assert_eq!(t.entropy(), 0);

        let mut t = StabilizerTableau::new(1);
        let first = t.measure(&p("Z"), &mut rng).phase();
        assert_eq!(t.measure(&p("Z"), &mut rng), Outcome::Deterministic(first));
        assert_eq!(t.measure(&p("-Z"), &mut rng).phase(), first.map(|f| f * Phase::Minus));
        assert!(t.measure(&p("X"), &mut rng).is_random());
        assert_eq!(t.rank(), 1);
    }

    #[test]
    fn membership() {
        let mut t = StabilizerTableau::new(3);
        t.measure_postselect(&p("ZZI"), Phase::Plus).unwrap();
        t.measure_postselect(&p("IZZ"), Phase::Minus).unwrap();
        assert_eq!(t.contains(&p("ZIZ")), Membership::InGroup(Phase::Minus));
        assert_eq!(t.contains(&p("-ZIZ")), Membership::InGroup(Phase::Plus));
        assert_eq!(t.contains(&p("XXX")), Membership::CommutesNotInSpan);
        assert_eq!(t.contains(&p("XII")), Membership::Anticommutes);
        assert!(t.measure_postselect(&p("ZIZ"), Phase::Plus).is_err());
        assert_eq!(t.expectation_squared(&p("ZIZ")), 1);
        assert_eq!(t.expectation_squared(&p("ZII")), 0);
    }
}
