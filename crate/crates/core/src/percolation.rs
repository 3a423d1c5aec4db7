//! Bond percolation on the superlattices obtained by contracting the
//! ordered link colors of the honeycomb torus.
//!
//! Positions are integer plaquette/cell coordinates on Z^2 with period L;
//! a bond carries the displacement from its first to its second node.

use std::fmt;
use std::io::{Read, Write};

use num_traits::Float;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{crossing, estimate_criticality, CollapsePoint, CollapseSearch, Criticality};
use crate::anyon::Color;
use crate::condensation::{MeasurementSequence, Stage};
use crate::error::{Error, Result};
use crate::lattice::HoneycombTorus;

type Vec2 = [i64; 2];

fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn det(a: Vec2, b: Vec2) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Union-find over torus nodes that records, per cluster, the winding
/// vectors of the cycles closed inside it.
#[derive(Clone, Debug)]
pub struct UnionFindTorus {
    period: i64,
    parent: Vec<usize>,
    rank: Vec<u8>,
    /// Position of a node minus that of its parent.
    offset: Vec<Vec2>,
    /// Independent windings of each root, in units of the period.
    windings: Vec<Vec<Vec2>>,
    max_rank: usize,
}

impl UnionFindTorus {
    pub fn new(nodes: usize, period: usize) -> UnionFindTorus {
        UnionFindTorus {
            period: period as i64,
            parent: (0..nodes).collect(),
            rank: vec![0; nodes],
            offset: vec![[0, 0]; nodes],
            windings: vec![Vec::new(); nodes],
            max_rank: 0,
        }
    }

    /// Root of `x`; afterwards `offset[x]` is its position relative to it.
    pub fn find(&mut self, x: usize) -> usize {
        let p = self.parent[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.offset[x] = add(self.offset[x], self.offset[p]);
        self.parent[x] = r;
        r
    }

    fn add_winding(&mut self, root: usize, w: Vec2) {
        let ws = &mut self.windings[root];
        let independent = match ws.as_slice() {
            [] => w != [0, 0],
            [a] => det(*a, w) != 0,
            _ => false,
        };
        if independent {
            ws.push(w);
            self.max_rank = self.max_rank.max(ws.len());
        }
    }

    /// Joins `a` and `b` with `b` displaced by `d` from `a`.
    pub fn union(&mut self, a: usize, b: usize, d: Vec2) {
        let (ra, rb) = (self.find(a), self.find(b));
        let delta = sub(add(self.offset[a], d), self.offset[b]);
        if ra == rb {
            if delta != [0, 0] {
                debug_assert!(delta.iter().all(|v| v % self.period == 0));
                self.add_winding(ra, [delta[0] / self.period, delta[1] / self.period]);
            }
            return;
        }
        let (root, child, child_offset) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb, delta)
        } else {
            (rb, ra, [-delta[0], -delta[1]])
        };
        self.parent[child] = root;
        self.offset[child] = child_offset;
        if self.rank[root] == self.rank[child] {
            self.rank[root] += 1;
        }
        for w in std::mem::take(&mut self.windings[child]) {
            self.add_winding(root, w);
        }
    }

    /// Position of `x` relative to its root.
    pub fn offset(&mut self, x: usize) -> Vec2 {
        self.find(x);
        self.offset[x]
    }

    /// Number of independent cycles wound by the cluster of `x`.
    pub fn winding_rank(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.windings[r].len()
    }

    /// Largest winding rank over all clusters.
    pub fn max_rank(&self) -> usize {
        self.max_rank
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuperlatticeKind {
    Triangular,
    Kagome,
}

impl fmt::Display for SuperlatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuperlatticeKind::Triangular => "triangular",
            SuperlatticeKind::Kagome => "kagome",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bond {
    pub nodes: [usize; 2],
    pub shift: Vec2,
    /// Honeycomb link the bond comes from.
    pub link: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Superlattice {
    pub kind: SuperlatticeKind,
    pub size: usize,
    pub disordered: Vec<Color>,
    pub num_nodes: usize,
    pub bonds: Vec<Bond>,
    /// Dual bonds between the two plaquettes bordering each disordered link.
    /// A performed measurement opens the bond, a missing one its dual.
    pub dual_bonds: Vec<Bond>,
}

/// Cell displacement from the up site to the down site of link slot k.
const LINK_SHIFT: [Vec2; 3] = [[0, -1], [-1, 0], [0, 0]];

/// Plaquettes on either side of link slot k, relative to the link's cell.
const LINK_SIDES: [[Vec2; 2]; 3] = [[[0, 0], [1, 0]], [[0, 0], [0, 1]], [[1, 0], [0, 1]]];

/// Contracts the links whose color is not disordered. One color gives the
/// triangular superlattice, two give the kagome one.
pub fn contract(lat: &HoneycombTorus, disordered: &[Color]) -> Result<Superlattice> {
    let mut colors = disordered.to_vec();
    colors.sort();
    colors.dedup();
    let kind = match (colors.len(), disordered.len()) {
        (1, 1) => SuperlatticeKind::Triangular,
        (2, 2) => SuperlatticeKind::Kagome,
        _ => {
            return Err(Error::Unsupported(format!(
                "no contraction for disordered colors {disordered:?}"
            )))
        }
    };
    let l = lat.size();
    let cell_of = |site: usize| {
        let c = site / 2;
        [(c % l) as i64, (c / l) as i64]
    };
    let mut uf = UnionFindTorus::new(lat.sites_per_layer(), l);
    for (e, link) in lat.links().iter().enumerate() {
        if !colors.contains(&link.color) {
            uf.union(link.sites[0], link.sites[1], LINK_SHIFT[e % 3]);
        }
    }
    if uf.max_rank() > 0 {
        return Err(Error::Unsupported("contracted links wind the torus".into()));
    }
    let mut id = vec![usize::MAX; lat.sites_per_layer()];
    let mut num_nodes = 0;
    for s in 0..id.len() {
        let r = uf.find(s);
        if id[r] == usize::MAX {
            id[r] = num_nodes;
            num_nodes += 1;
        }
        id[s] = id[r];
    }
    let mut bonds = Vec::new();
    let mut dual_bonds = Vec::new();
    for (e, link) in lat.links().iter().enumerate() {
        if !colors.contains(&link.color) {
            continue;
        }
        let [a, b] = link.sites;
        let shift = sub(add(uf.offset(a), LINK_SHIFT[e % 3]), uf.offset(b));
        bonds.push(Bond {
            nodes: [id[a], id[b]],
            shift,
            link: e,
        });
        let cell = cell_of(a);
        let [s0, s1] = LINK_SIDES[e % 3].map(|d| add(cell, d));
        let plaquette = |v: Vec2| lat.cell(v[0] as isize, v[1] as isize);
        dual_bonds.push(Bond {
            nodes: [plaquette(s0), plaquette(s1)],
            shift: sub(s1, s0),
            link: e,
        });
    }
    Ok(Superlattice {
        kind,
        size: l,
        disordered: colors,
        num_nodes,
        bonds,
        dual_bonds,
    })
}

/// Superlattice implied by the tagged stages of a sequence: one tagged
/// stage gives the triangular lattice of its color, two consecutive tagged
/// stages on the same layer with different colors give the kagome lattice.
/// Other patterns are left unclassified.
pub fn contraction_colors(seq: &MeasurementSequence) -> Option<Vec<Color>> {
    let tagged: Vec<(usize, usize, Color)> = seq
        .tc_stages()
        .iter()
        .enumerate()
        .filter_map(|(k, stage)| {
            let Stage::TcTc(slots) = stage else { return None };
            let (layer, _) = stage.tag()?;
            let cond = slots[layer.index()].as_ref()?;
            Some((k, layer.index(), cond.boson.color))
        })
        .collect();
    match tagged.as_slice() {
        [(_, _, c)] => Some(vec![*c]),
        [(k0, l0, c0), (k1, l1, c1)] if k1 - k0 == 1 && l0 == l1 && c0 != c1 => Some(vec![*c0, *c1]),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Dominance {
    /// The missing-measurement automorphism holds cycles of both classes.
    ADominant,
    /// The kept automorphism holds cycles of both classes.
    BDominant,
    NoncontractibleBoundary,
}

/// Winding ranks of the kept-bond clusters of the superlattice and of the
/// dual clusters of missing bonds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Realization {
    pub missing_rank: usize,
    pub kept_rank: usize,
}

impl Realization {
    pub fn dominance(&self) -> Dominance {
        if self.missing_rank == 2 {
            Dominance::ADominant
        } else if self.kept_rank == 2 {
            Dominance::BDominant
        } else {
            Dominance::NoncontractibleBoundary
        }
    }
}

fn rank_of<'a>(nodes: usize, period: usize, bonds: impl Iterator<Item = &'a Bond>) -> usize {
    let mut uf = UnionFindTorus::new(nodes, period);
    for b in bonds {
        uf.union(b.nodes[0], b.nodes[1], b.shift);
    }
    uf.max_rank()
}

impl Superlattice {
    pub fn num_bonds(&self) -> usize {
        self.bonds.len()
    }

    /// Largest winding rank of the clusters of the given bonds.
    pub fn winding_rank<'a>(&self, open: impl Iterator<Item = &'a Bond>) -> usize {
        rank_of(self.num_nodes, self.size, open)
    }

    /// Largest winding rank of the dual clusters of the given dual bonds.
    pub fn dual_winding_rank<'a>(&self, open: impl Iterator<Item = &'a Bond>) -> usize {
        rank_of(self.size * self.size, self.size, open)
    }

    /// Classifies one period's realization; `kept` is indexed by honeycomb
    /// link.
    pub fn classify(&self, kept: &[bool]) -> Realization {
        Realization {
            missing_rank: self.dual_winding_rank(self.dual_bonds.iter().filter(|b| !kept[b.link])),
            kept_rank: self.winding_rank(self.bonds.iter().filter(|b| kept[b.link])),
        }
    }
}

/// Canonical classification of a realization on the lattice.
pub fn classify_realization(lat: &HoneycombTorus, disordered: &[Color], kept: &[bool]) -> Result<Dominance> {
    if kept.len() != lat.links().len() {
        return Err(Error::Config(format!("{} link flags for {} links", kept.len(), lat.links().len())));
    }
    Ok(contract(lat, disordered)?.classify(kept).dominance())
}

/// Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate<T> {
    pub mean: T,
    pub err: T,
}

fn sample_seed(seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    rng
}

/// Fraction of samples, each bond open with probability p, holding a
/// cluster that wraps at least one cycle.
pub fn wrapping_probability(sl: &Superlattice, p: f64, samples: usize, seed: u64) -> Result<Estimate<f64>> {
    if !(0.0..=1.0).contains(&p) || samples == 0 {
        return Err(Error::Config(format!("need p in [0, 1] and samples > 0, got {p} and {samples}")));
    }
    let hits: usize = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_seed(seed, k);
            usize::from(sl.winding_rank(sl.bonds.iter().filter(|_| rng.gen::<f64>() < p)) > 0)
        })
        .sum();
    Ok(binomial_estimate(hits as f64 / samples as f64, samples))
}

fn binomial_estimate<T: Float>(r: T, samples: usize) -> Estimate<T> {
    let n = T::from(samples).unwrap_or_else(T::one);
    Estimate {
        mean: r,
        err: (r * (T::one() - r) / n).max(T::zero()).sqrt(),
    }
}

/// Newman-Ziff record: for every sample, the number of bonds added in a
/// random order when the first wrapping cluster appears.
#[derive(Clone, Debug, Serialize)]
pub struct WrappingCurve {
    pub kind: SuperlatticeKind,
    pub size: usize,
    pub bonds: usize,
    pub samples: usize,
    /// Fraction of samples wrapping after n bonds, n = 0..=bonds.
    pub microcanonical: Vec<f64>,
}

pub fn wrapping_curve(sl: &Superlattice, samples: usize, seed: u64) -> Result<WrappingCurve> {
    if samples == 0 {
        return Err(Error::Config("need at least one sample".into()));
    }
    let n = sl.num_bonds();
    let firsts: Vec<usize> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_seed(seed, k);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut uf = UnionFindTorus::new(sl.num_nodes, sl.size);
            for (added, &i) in order.iter().enumerate() {
                let b = &sl.bonds[i];
                uf.union(b.nodes[0], b.nodes[1], b.shift);
                if uf.max_rank() > 0 {
                    return added + 1;
                }
            }
            n + 1
        })
        .collect();
    let mut counts = vec![0usize; n + 2];
    for f in firsts {
        counts[f] += 1;
    }
    let mut acc = 0;
    let microcanonical = (0..=n)
        .map(|k| {
            acc += counts[k];
            acc as f64 / samples as f64
        })
        .collect();
    Ok(WrappingCurve {
        kind: sl.kind,
        size: sl.size,
        bonds: n,
        samples,
        microcanonical,
    })
}

/// Sum over n of Binomial(n; N, p) r_n, with the weights built in log
/// space from the mode outwards.
pub fn canonical_average<T: Float>(micro: &[T], p: T) -> T {
    let n = micro.len() - 1;
    if n == 0 || p <= T::zero() {
        return micro[0];
    }
    if p >= T::one() {
        return micro[n];
    }
    let ratio = (p / (T::one() - p)).ln();
    let cast = |v: usize| T::from(v).unwrap_or_else(T::zero);
    let mut logw = vec![T::zero(); n + 1];
    logw[0] = cast(n) * (T::one() - p).ln();
    for k in 0..n {
        logw[k + 1] = logw[k] + (cast(n - k) / cast(k + 1)).ln() + ratio;
    }
    let top = logw.iter().copied().fold(T::neg_infinity(), T::max);
    let (mut num, mut den) = (T::zero(), T::zero());
    for (w, &r) in logw.iter().zip(micro) {
        let e = (*w - top).exp();
        num = num + e * r;
        den = den + e;
    }
    num / den
}

impl WrappingCurve {
    pub fn probability(&self, p: f64) -> Estimate<f64> {
        binomial_estimate(canonical_average(&self.microcanonical, p), self.samples)
    }
}

/// One CSV row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WrapRow {
    pub kind: SuperlatticeKind,
    #[serde(rename = "L")]
    pub size: usize,
    pub p: f64,
    pub wrap: f64,
    pub err: f64,
}

/// Wrapping curves of several sizes on a shared p grid.
pub fn scan(disordered: &[Color], sizes: &[usize], ps: &[f64], samples: usize, seed: u64) -> Result<Vec<WrapRow>> {
    let mut rows = Vec::new();
    for (k, &l) in sizes.iter().enumerate() {
        let sl = contract(&HoneycombTorus::new(l)?, disordered)?;
        let curve = wrapping_curve(&sl, samples, seed ^ ((k as u64) << 32))?;
        rows.extend(ps.iter().map(|&p| {
            let e = curve.probability(p);
            WrapRow {
                kind: sl.kind,
                size: l,
                p,
                wrap: e.mean,
                err: e.err,
            }
        }));
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[WrapRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<WrapRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(|e: csv::Error| Error::Config(e.to_string())))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PercolationCriticality {
    /// Crossing of each pair of consecutive sizes.
    pub crossings: Vec<(usize, usize, f64)>,
    /// Crossing of the two largest sizes.
    pub pc_crossing: f64,
    pub collapse: Criticality<f64>,
}

/// Size crossings for p_c, then a collapse of the curves restricted to
/// `window` around the last crossing for nu.
pub fn estimate(rows: &[WrapRow], window: f64, search: &CollapseSearch<f64>) -> Result<PercolationCriticality> {
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return Err(Error::InsufficientData("need at least two sizes".into()));
    }
    let curve = |l: usize| -> (Vec<f64>, Vec<f64>) { rows.iter().filter(|r| r.size == l).map(|r| (r.p, r.wrap)).unzip() };
    let mut crossings = Vec::new();
    for w in sizes.windows(2) {
        let (pa, ya) = curve(w[0]);
        let (pb, yb) = curve(w[1]);
        if pa != pb {
            return Err(Error::Config("sizes sampled on different p grids".into()));
        }
        if let Some(x) = crossing(&pa, &ya, &yb) {
            crossings.push((w[0], w[1], x));
        }
    }
    let pc_crossing = crossings
        .last()
        .map(|c| c.2)
        .ok_or_else(|| Error::InsufficientData("curves do not cross".into()))?;
    let points: Vec<CollapsePoint<f64>> = rows
        .iter()
        .filter(|r| (r.p - pc_crossing).abs() <= window)
        .map(|r| CollapsePoint {
            size: r.size,
            p: r.p,
            y: r.wrap,
            err: r.err,
        })
        .collect();
    let collapse = estimate_criticality(&points, search)?;
    Ok(PercolationCriticality {
        crossings,
        pc_crossing,
        collapse,
    })
}
