//! Reference stabilizer simulator: a plain generator list and dense GF(2)
//! elimination for every span query.

use dacode::anyon::Phase;
use dacode::error::{Error, Result};
use dacode::pauli::PauliOperator;
use dacode::tableau::{Membership, Outcome, StabilizerBackend};
use rand::Rng;

#[derive(Clone, Debug)]
pub struct NaiveTableau {
    n: usize,
    gens: Vec<PauliOperator>,
}

fn packed(p: &PauliOperator) -> Vec<u64> {
    p.x_words().iter().chain(p.z_words()).copied().collect()
}

fn get(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

fn xor(a: &mut [u64], b: &[u64]) {
    a.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
}

impl NaiveTableau {
    pub fn new(n: usize) -> NaiveTableau {
        NaiveTableau { n, gens: Vec::new() }
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.gens
    }

    /// Indices of generators whose product matches `p` up to sign.
    fn combination(&self, p: &PauliOperator) -> Option<Vec<usize>> {
        let k = self.gens.len();
        let tag_words = k.div_ceil(64).max(1);
        // Rows: generator bits and a tag recording which generators they sum.
        let mut rows: Vec<(Vec<u64>, Vec<u64>)> = self
            .gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut tag = vec![0u64; tag_words];
                tag[i / 64] |= 1 << (i % 64);
                (packed(g), tag)
            })
            .collect();
        let mut target = packed(p);
        let mut used = vec![0u64; tag_words];
        let mut pivot_row = 0;
        for col in 0..target.len() * 64 {
            let Some(r) = (pivot_row..k).find(|&r| get(&rows[r].0, col)) else {
                continue;
            };
            rows.swap(pivot_row, r);
            let pivot = rows[pivot_row].clone();
            for (r2, row) in rows.iter_mut().enumerate() {
                if r2 != pivot_row && get(&row.0, col) {
                    xor(&mut row.0, &pivot.0);
                    xor(&mut row.1, &pivot.1);
                }
            }
            if get(&target, col) {
                xor(&mut target, &pivot.0);
                xor(&mut used, &pivot.1);
            }
            pivot_row += 1;
        }
        target
            .iter()
            .all(|&w| w == 0)
            .then(|| (0..k).filter(|&i| get(&used, i)).collect())
    }

    fn sign_in_group(&self, p: &PauliOperator, idx: &[usize]) -> Phase {
        let mut acc = PauliOperator::identity(self.n);
        for &i in idx {
            acc = acc.mul(&self.gens[i]).unwrap();
        }
        if acc.sign() == p.sign() {
            Phase::Plus
        } else {
            Phase::Minus
        }
    }

    fn signed(p: &PauliOperator, s: Phase) -> PauliOperator {
        if s == Phase::Minus {
            p.negated()
        } else {
            p.clone()
        }
    }

    fn project(&mut self, p: &PauliOperator, s: Phase) {
        if let Some(i) = self.gens.iter().position(|g| g.anticommutes(p)) {
            let pivot = self.gens[i].clone();
            for j in 0..self.gens.len() {
                if j != i && self.gens[j].anticommutes(p) {
                    self.gens[j] = self.gens[j].mul(&pivot).unwrap();
                }
            }
            self.gens[i] = Self::signed(p, s);
        } else {
            self.gens.push(Self::signed(p, s));
        }
    }
}

impl StabilizerBackend for NaiveTableau {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn rank(&self) -> usize {
        self.gens.len()
    }

    fn measure<R: Rng + ?Sized>(&mut self, p: &PauliOperator, rng: &mut R) -> Outcome {
        let anti = self.gens.iter().any(|g| g.anticommutes(p));
        if !anti {
            if let Some(idx) = self.combination(p) {
                return Outcome::Deterministic(Some(self.sign_in_group(p, &idx)));
            }
        }
        let s = if rng.gen::<bool>() { Phase::Minus } else { Phase::Plus };
        self.project(p, s);
        Outcome::Random(s)
    }

    fn measure_postselect(&mut self, p: &PauliOperator, want: Phase) -> Result<()> {
        let anti = self.gens.iter().any(|g| g.anticommutes(p));
        if !anti {
            if let Some(idx) = self.combination(p) {
                return if self.sign_in_group(p, &idx) == want {
                    Ok(())
                } else {
                    Err(Error::Postselection("fixed".into()))
                };
            }
        }
        self.project(p, want);
        Ok(())
    }

    fn contains(&self, p: &PauliOperator) -> Membership {
        if self.gens.iter().any(|g| g.anticommutes(p)) {
            return Membership::Anticommutes;
        }
        match self.combination(p) {
            Some(idx) => Membership::InGroup(self.sign_in_group(p, &idx)),
            None => Membership::CommutesNotInSpan,
        }
    }
}
