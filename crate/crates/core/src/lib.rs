pub mod analysis;
pub mod anyon;
pub mod automorphism;
pub mod condensation;
pub mod error;
pub mod experiment;
pub mod fet_graph;
pub mod lattice;
pub mod logical;
pub mod pauli;
pub mod percolation;
pub mod tableau;

pub type Asymptote = analysis::Asymptote<f64>;
pub type CollapsePoint = analysis::CollapsePoint<f64>;
pub type CollapseSearch = analysis::CollapseSearch<f64>;
pub type Criticality = analysis::Criticality<f64>;
pub type DecayFit = analysis::DecayFit<f64>;
pub type Line = analysis::Line<f64>;
