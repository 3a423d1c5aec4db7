//! Two-layer 6-6-6 honeycomb torus.
//!
//! Plaquettes sit at (i, j) in Z_L x Z_L with color (i + 2j) mod 3
//! (0 = r, 1 = g, 2 = b). Each plaquette triple {(i,j), (i+1,j), (i,j+1)}
//! meets at the "up" site of cell (i, j) and {(i+1,j), (i,j+1), (i+1,j+1)}
//! at its "down" site. Site (i, j, up) has index 2(i + L j), the down site
//! 2(i + L j) + 1. Links leave each up site towards three down sites:
//!
//! * k = 0: down(i, j-1), joining plaquettes (i, j+1) and (i+1, j-1),
//! * k = 1: down(i-1, j), joining plaquettes (i+1, j) and (i-1, j+1),
//! * k = 2: down(i, j), joining plaquettes (i, j) and (i+1, j+1),
//!
//! with index 3(i + L j) + k. A link takes the color of the plaquettes it
//! joins. Qubit index is layer * 2L^2 + site.

use serde::Serialize;

use crate::anyon::{Anyon, Color, Flavor};
use crate::condensation::{Boson, Layer};
use crate::error::{Error, Result};
use crate::logical::{decompose, Direction, LogicalFactor};
use crate::pauli::{Pauli, PauliOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Link {
    pub sites: [usize; 2],
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoneycombTorus {
    l: usize,
    links: Vec<Link>,
    plaquette_sites: Vec<[usize; 6]>,
}

fn flavor_pauli(f: Flavor) -> Pauli {
    match f {
        Flavor::X => Pauli::X,
        Flavor::Y => Pauli::Y,
        Flavor::Z => Pauli::Z,
    }
}

impl HoneycombTorus {
    pub fn new(l: usize) -> Result<HoneycombTorus> {
        if l < 3 || !l.is_multiple_of(3) {
            return Err(Error::InvalidLattice(l));
        }
        let mut lat = HoneycombTorus {
            l,
            links: Vec::with_capacity(3 * l * l),
            plaquette_sites: Vec::with_capacity(l * l),
        };
        for j in 0..l {
            for i in 0..l {
                let up = lat.up(i as isize, j as isize);
                let ends = [
                    (lat.down(i as isize, j as isize - 1), lat.color(i as isize, j as isize + 1)),
                    (lat.down(i as isize - 1, j as isize), lat.color(i as isize + 1, j as isize)),
                    (lat.down(i as isize, j as isize), lat.color(i as isize, j as isize)),
                ];
                for (down, color) in ends {
                    lat.links.push(Link {
                        sites: [up, down],
                        color,
                    });
                }
            }
        }
        for j in 0..l as isize {
            for i in 0..l as isize {
                lat.plaquette_sites.push([
                    lat.up(i, j),
                    lat.up(i - 1, j),
                    lat.up(i, j - 1),
                    lat.down(i - 1, j - 1),
                    lat.down(i - 1, j),
                    lat.down(i, j - 1),
                ]);
            }
        }
        Ok(lat)
    }

    pub fn size(&self) -> usize {
        self.l
    }

    pub fn sites_per_layer(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.sites_per_layer()
    }

    pub fn num_plaquettes(&self) -> usize {
        self.l * self.l
    }

    fn wrap(&self, i: isize) -> usize {
        i.rem_euclid(self.l as isize) as usize
    }

    pub fn cell(&self, i: isize, j: isize) -> usize {
        self.wrap(i) + self.l * self.wrap(j)
    }

    pub fn up(&self, i: isize, j: isize) -> usize {
        2 * self.cell(i, j)
    }

    pub fn down(&self, i: isize, j: isize) -> usize {
        2 * self.cell(i, j) + 1
    }

    pub fn color(&self, i: isize, j: isize) -> Color {
        Color::from_index((i + 2 * j).rem_euclid(3) as usize)
    }

    pub fn plaquette_color(&self, p: usize) -> Color {
        self.color((p % self.l) as isize, (p / self.l) as isize)
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, i: isize, j: isize, k: usize) -> usize {
        3 * self.cell(i, j) + k
    }

    pub fn plaquette_sites(&self, p: usize) -> [usize; 6] {
        self.plaquette_sites[p]
    }

    pub fn qubit(&self, layer: Layer, site: usize) -> usize {
        layer.index() * self.sites_per_layer() + site
    }

    /// Link indices of one color.
    pub fn links_of_color(&self, c: Color) -> Vec<usize> {
        (0..self.links.len()).filter(|&e| self.links[e].color == c).collect()
    }

    /// sigma x sigma on both ends of one link.
    pub fn hopping_operator(&self, boson: Boson, layer: Layer, link: usize) -> PauliOperator {
        let [a, b] = self.links[link].sites;
        let p = flavor_pauli(boson.flavor);
        PauliOperator::uniform(self.num_qubits(), &[self.qubit(layer, a), self.qubit(layer, b)], p)
            .expect("link endpoints are distinct")
    }

    /// Hopping operators on every link of the boson's color, in link order.
    pub fn hopping_operators(&self, boson: Boson, layer: Layer) -> Vec<PauliOperator> {
        self.links_of_color(boson.color)
            .into_iter()
            .map(|e| self.hopping_operator(boson, layer, e))
            .collect()
    }

    /// Z1 Z2 on every site.
    pub fn interlayer_links(&self) -> Vec<PauliOperator> {
        (0..self.sites_per_layer())
            .map(|s| {
                PauliOperator::uniform(
                    self.num_qubits(),
                    &[self.qubit(Layer::One, s), self.qubit(Layer::Two, s)],
                    Pauli::Z,
                )
                .expect("distinct layers")
            })
            .collect()
    }

    pub fn plaquette_operator(&self, p: usize, layer: Layer, pauli: Pauli) -> PauliOperator {
        let qubits: Vec<usize> = self.plaquette_sites[p].iter().map(|&s| self.qubit(layer, s)).collect();
        PauliOperator::uniform(self.num_qubits(), &qubits, pauli).expect("six distinct sites")
    }

    /// All P_X and P_Z of both layers.
    pub fn plaquette_operators(&self) -> Vec<PauliOperator> {
        let mut out = Vec::with_capacity(4 * self.num_plaquettes());
        for layer in Layer::BOTH {
            for pauli in [Pauli::X, Pauli::Z] {
                for p in 0..self.num_plaquettes() {
                    out.push(self.plaquette_operator(p, layer, pauli));
                }
            }
        }
        out
    }

    /// Generators of the interlayer-condensed stabilizer group: P_X on
    /// both layers at once, P_Z of layer 1 and Z1 Z2 on every site.
    pub fn cc_tilde_generators(&self) -> Vec<PauliOperator> {
        let mut out = Vec::with_capacity(2 * self.num_plaquettes() + self.sites_per_layer());
        for p in 0..self.num_plaquettes() {
            out.push(
                self.plaquette_operator(p, Layer::One, Pauli::X)
                    .mul(&self.plaquette_operator(p, Layer::Two, Pauli::X))
                    .expect("disjoint supports"),
            );
        }
        for p in 0..self.num_plaquettes() {
            out.push(self.plaquette_operator(p, Layer::One, Pauli::Z));
        }
        out.extend(self.interlayer_links());
        out
    }

    /// Sites visited by the canonical string of a color along a cycle,
    /// on one layer. Red strings start at plaquette (0, 0), blue and green
    /// strings at the first plaquette of that color on the row j = 0.
    pub fn string_sites(&self, color: Color, direction: Direction) -> Vec<usize> {
        let x0 = (0..3).find(|&i| self.color(i, 0) == color).expect("three colors on a row");
        let mut sites = Vec::with_capacity(2 * self.l);
        for k in 0..self.l as isize {
            match direction {
                // (1, 1) steps across k = 2 links.
                Direction::V => {
                    let (i, j) = (x0 + k, k);
                    sites.push(self.up(i, j));
                    sites.push(self.down(i, j));
                }
                // (1, -2) steps across k = 0 links.
                Direction::H => {
                    let (i, j) = (x0 + k, -2 * k - 1);
                    sites.push(self.up(i, j));
                    sites.push(self.down(i, j - 1));
                }
            }
        }
        sites
    }

    /// Links used by the canonical string.
    pub fn string_links(&self, color: Color, direction: Direction) -> Vec<usize> {
        let x0 = (0..3).find(|&i| self.color(i, 0) == color).expect("three colors on a row");
        (0..self.l as isize)
            .map(|k| match direction {
                Direction::V => self.link(x0 + k, k, 2),
                Direction::H => self.link(x0 + k, -2 * k - 1, 0),
            })
            .collect()
    }

    /// String operator of a single boson generator of the condensed code:
    /// x-type strings act on both layers, z-type strings on layer 1.
    fn generator_string(&self, boson: Anyon, direction: Direction) -> PauliOperator {
        let (color, flavor) = boson.as_boson().expect("generator is a boson");
        let sites = self.string_sites(color, direction);
        let mut qubits: Vec<usize> = sites.iter().map(|&s| self.qubit(Layer::One, s)).collect();
        let pauli = match flavor {
            Flavor::X => {
                qubits.extend(sites.iter().map(|&s| self.qubit(Layer::Two, s)));
                Pauli::X
            }
            Flavor::Z => Pauli::Z,
            Flavor::Y => unreachable!("generators are x or z flavored"),
        };
        PauliOperator::uniform(self.num_qubits(), &qubits, pauli).expect("string sites are distinct")
    }

    /// Wilson string of any anyon along a cycle, as the product of its rx,
    /// rz, bx, bz components.
    pub fn logical_string(&self, anyon: Anyon, direction: Direction) -> PauliOperator {
        let [rx, rz, bx, bz] = decompose(anyon);
        let mut op = PauliOperator::identity(self.num_qubits());
        for (present, g) in [(rx, Anyon::RX), (rz, Anyon::RZ), (bx, Anyon::BX), (bz, Anyon::BZ)] {
            if present {
                let s = self.generator_string(g, direction);
                op = op.mul(&s).unwrap_or_else(|_| {
                    // Strings along the same cycle commute; crossing x and z
                    // strings of the same color share an even number of sites.
                    unreachable!("string components commute")
                });
            }
        }
        op
    }

    /// X1..X4 / Z1..Z4 representative.
    pub fn logical_operator(&self, f: LogicalFactor) -> PauliOperator {
        let (a, d) = f.string();
        self.logical_string(a, d)
    }

    /// Image of a site under the plaquette translation (di, dj).
    pub fn translate_site(&self, site: usize, di: isize, dj: isize) -> usize {
        let c = site / 2;
        let (i, j) = ((c % self.l) as isize + di, (c / self.l) as isize + dj);
        2 * self.cell(i, j) + site % 2
    }

    /// Translates an operator on both layers; the shift must preserve the
    /// plaquette coloring.
    pub fn translate(&self, op: &PauliOperator, di: isize, dj: isize) -> Result<PauliOperator> {
        if (di + 2 * dj).rem_euclid(3) != 0 {
            return Err(Error::Unsupported(format!("translation ({di}, {dj}) permutes colors")));
        }
        let spl = self.sites_per_layer();
        let terms: Vec<(usize, Pauli)> = op
            .support()
            .into_iter()
            .map(|q| (q / spl * spl + self.translate_site(q % spl, di, dj), op.get(q)))
            .collect();
        let out = PauliOperator::from_sparse(self.num_qubits(), &terms)?;
        Ok(if op.sign() == crate::anyon::Phase::Minus { out.negated() } else { out })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let plaquettes: Vec<serde_json::Value> = (0..self.num_plaquettes())
            .map(|p| {
                serde_json::json!({
                    "index": p,
                    "coords": [p % self.l, p / self.l],
                    "color": self.plaquette_color(p).letter().to_string(),
                    "sites": self.plaquette_sites[p],
                })
            })
            .collect();
        let links: Vec<serde_json::Value> = self
            .links
            .iter()
            .enumerate()
            .map(|(e, l)| serde_json::json!({"index": e, "sites": l.sites, "color": l.color.letter().to_string()}))
            .collect();
        let sites: Vec<serde_json::Value> = (0..self.sites_per_layer())
            .map(|s| {
                let c = s / 2;
                serde_json::json!({
                    "index": s,
                    "cell": [c % self.l, c / self.l],
                    "kind": if s % 2 == 0 { "up" } else { "down" },
                })
            })
            .collect();
        serde_json::json!({
            "L": self.l,
            "sites_per_layer": self.sites_per_layer(),
            "qubit_index": "layer * sites_per_layer + site",
            "sites": sites,
            "links": links,
            "plaquettes": plaquettes,
        })
    }
}
