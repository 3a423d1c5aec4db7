//! Adjacency, connectivity and logical connectivity of the 72 FETs, each
//! labeled by the automorphism it enacts.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::anyon::{Anyon, FermionGroup};
use crate::automorphism::{transition_map, Automorphism, ClassId, Parity};
use crate::condensation::{
    concatenate, find_one_component_model, synthesize_sequence, Boundary, CornerOutcome, DisorderModel,
    MeasurementSequence, Theory,
};
use crate::error::{Error, Result};
use crate::logical::{expansion, format_product, Direction};

/// Separation condition: the transition map is a color-flavor reflection.
pub fn adjacent(phi_a: Automorphism, phi_b: Automorphism) -> bool {
    transition_map(phi_a, phi_b).class() == ClassId::Reflection
}

#[derive(Clone, Debug)]
pub struct FetGraph {
    nodes: Vec<Automorphism>,
    adjacency: Vec<Vec<bool>>,
    distance: Vec<Vec<Option<u32>>>,
}

impl FetGraph {
    pub fn build() -> FetGraph {
        let nodes = Automorphism::all();
        let n = nodes.len();
        let adjacency: Vec<Vec<bool>> = nodes
            .iter()
            .map(|&a| nodes.iter().map(|&b| adjacent(a, b)).collect())
            .collect();
        let distance = (0..n)
            .map(|s| {
                let mut d = vec![None; n];
                d[s] = Some(0);
                let mut queue = VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    for v in 0..n {
                        if adjacency[u][v] && d[v].is_none() {
                            d[v] = Some(d[u].unwrap() + 1);
                            queue.push_back(v);
                        }
                    }
                }
                d
            })
            .collect();
        FetGraph {
            nodes,
            adjacency,
            distance,
        }
    }

    pub fn nodes(&self) -> &[Automorphism] {
        &self.nodes
    }

    pub fn index(&self, phi: Automorphism) -> usize {
        self.nodes.binary_search(&phi).expect("every automorphism is a node")
    }

    pub fn adjacent(&self, a: Automorphism, b: Automorphism) -> bool {
        self.adjacency[self.index(a)][self.index(b)]
    }

    /// Minimum adjacency-sequence length, `None` when unreachable.
    pub fn distance(&self, a: Automorphism, b: Automorphism) -> Option<u32> {
        self.distance[self.index(a)][self.index(b)]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().flatten().filter(|&&e| e).count() / 2
    }

    /// Connected components, each sorted.
    pub fn components(&self) -> Vec<Vec<Automorphism>> {
        let mut seen = vec![false; self.nodes.len()];
        let mut out = Vec::new();
        for s in 0..self.nodes.len() {
            if seen[s] {
                continue;
            }
            let comp: Vec<Automorphism> = (0..self.nodes.len())
                .filter(|&v| self.distance[s][v].is_some())
                .inspect(|&v| seen[v] = true)
                .map(|v| self.nodes[v])
                .collect();
            out.push(comp);
        }
        out
    }

    /// Nodes grouped by conjugacy class in table order.
    pub fn class_order(&self) -> Vec<Automorphism> {
        let mut v = self.nodes.clone();
        v.sort_by_key(|a| (a.class(), *a));
        v
    }

    /// Distance matrix as CSV, rows and columns in class order; unreachable
    /// entries are empty.
    pub fn write_distance_csv<W: Write>(&self, out: W) -> Result<()> {
        let order = self.class_order();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["automorphism".to_string(), "class".to_string()];
        header.extend(order.iter().map(|a| a.to_string()));
        w.write_record(&header)?;
        for &a in &order {
            let mut row = vec![a.to_string(), a.class().to_string()];
            row.extend(
                order
                    .iter()
                    .map(|&b| self.distance(a, b).map_or(String::new(), |d| d.to_string())),
            );
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Graphviz description of the adjacency graph.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph fets {\n");
        for a in &self.nodes {
            let _ = writeln!(
                s,
                "  \"{a}\" [class=\"{}\", parity=\"{:?}\"];",
                a.class(),
                a.s3s3_parity()
            );
        }
        for (i, a) in self.nodes.iter().enumerate() {
            for (j, b) in self.nodes.iter().enumerate().skip(i + 1) {
                if self.adjacency[i][j] {
                    let _ = writeln!(s, "  \"{a}\" -- \"{b}\";");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Which protected algebra certifies logical connectivity, and the parity
/// of the adjacency-sequence length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LogicalCertificate {
    pub table: FermionGroup,
    pub path_length_parity: Parity,
}

/// Fermion group of the fermions localized at a reflection or a double
/// rotation.
fn localized_group(tau: Automorphism) -> Option<FermionGroup> {
    let mut groups = tau
        .localized_anyons()
        .into_iter()
        .filter(|a| !a.is_vacuum())
        .map(|a| a.fermion_group().ok());
    let first = groups.next()??;
    groups.all(|g| g == Some(first)).then_some(first)
}

/// Logical connectivity, adopting the conjectured iff-rule: both
/// automorphisms even on S3 x S3 and the transition map a reflection (odd
/// length) or a double rotation (even length).
pub fn logically_connected(phi_a: Automorphism, phi_b: Automorphism) -> Option<LogicalCertificate> {
    if phi_a == phi_b || phi_a.s3s3_parity() != Parity::Even || phi_b.s3s3_parity() != Parity::Even {
        return None;
    }
    let tau = transition_map(phi_a, phi_b);
    let path_length_parity = match tau.class() {
        ClassId::Reflection => Parity::Odd,
        ClassId::DoubleRotation => Parity::Even,
        _ => return None,
    };
    Some(LogicalCertificate {
        table: localized_group(tau)?,
        path_length_parity,
    })
}

/// One row of a protected logical algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProtectedOperator {
    pub name: &'static str,
    pub anyon: Anyon,
    pub direction: Direction,
    /// Expansion over the base logicals, e.g. `X1Z4`.
    pub equivalent: String,
}

/// Protected algebra X~1, Z~1, X~2, Z~2 built from fermions of the group
/// other than the localized one.
pub fn protected_algebra(group: FermionGroup) -> [ProtectedOperator; 4] {
    let (x, z) = match group {
        FermionGroup::F => (Anyon::RX.fuse(Anyon::BZ), Anyon::RZ.fuse(Anyon::BY)),
        FermionGroup::FPrime => (Anyon::RZ.fuse(Anyon::BX), Anyon::RX.fuse(Anyon::BY)),
    };
    let op = |name, anyon, direction| ProtectedOperator {
        name,
        anyon,
        direction,
        equivalent: format_product(&expansion(anyon, direction)),
    };
    [
        op("X~1", x, Direction::V),
        op("Z~1", z, Direction::H),
        op("X~2", x, Direction::H),
        op("Z~2", z, Direction::V),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Protection {
    FullyProtected,
    CriticalLoss,
    IrreversibleRisk,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Protection,
    pub reasons: Vec<String>,
}

/// Applies the m-component criteria to every corner and corner pair.
/// Corner pairs enacting the same automorphism impose no constraint.
pub fn classify_m_component(dm: &DisorderModel) -> Result<Classification> {
    let table = dm.corner_outcomes()?;
    let mut reasons = Vec::new();
    for (key, out) in &table.outcomes {
        if let CornerOutcome::Irreversible(v) = out {
            reasons.push(format!("corner {key}: {v}"));
        }
    }
    if !reasons.is_empty() {
        return Ok(Classification {
            verdict: Protection::IrreversibleRisk,
            reasons,
        });
    }
    let corners: Vec<(&String, Automorphism)> = table
        .outcomes
        .iter()
        .map(|(k, o)| (k, o.automorphism().expect("all corners reversible")))
        .collect();
    for (k, phi) in &corners {
        if phi.s3s3_parity() == Parity::Odd {
            reasons.push(format!("corner {k}: {phi} is odd on S3 x S3"));
        }
    }
    for (i, (ka, a)) in corners.iter().enumerate() {
        for (kb, b) in &corners[i + 1..] {
            let tau = transition_map(*a, *b);
            if tau == Automorphism::IDENTITY {
                continue;
            }
            let manhattan = ka.chars().zip(kb.chars()).filter(|(x, y)| x != y).count();
            let required = if manhattan % 2 == 0 {
                ClassId::DoubleRotation
            } else {
                ClassId::Reflection
            };
            if tau.class() != required {
                reasons.push(format!(
                    "corners {ka}, {kb} (distance {manhattan}): transition {tau} is in {}, need {required}",
                    tau.class()
                ));
            }
        }
    }
    let verdict = if reasons.is_empty() {
        Protection::FullyProtected
    } else {
        Protection::CriticalLoss
    };
    Ok(Classification { verdict, reasons })
}

/// Builds a 1-component model realizing `phi_a` at p=0 and `phi_b` at p=1:
/// a synthesized `phi_a` sequence is concatenated with a model realizing
/// (id, tau) that starts where the first one ends.
pub fn adjacency_witness(phi_a: Automorphism, phi_b: Automorphism) -> Result<DisorderModel> {
    if !adjacent(phi_a, phi_b) {
        return Err(Error::SynthesisFailed(format!("{phi_a} and {phi_b} are not adjacent")));
    }
    let tau = transition_map(phi_a, phi_b);
    for t in Theory::boundary_theories() {
        let Ok(prefix): Result<MeasurementSequence> = synthesize_sequence(phi_a, Some(Boundary::Last(t))) else {
            continue;
        };
        if let Some(tail) = find_one_component_model(Automorphism::IDENTITY, tau, Some(t)) {
            return DisorderModel::new(concatenate(&prefix, &tail)?);
        }
    }
    Err(Error::SynthesisFailed(format!("no witness for {phi_a} -> {phi_b}")))
}
