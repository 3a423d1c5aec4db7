//! Condensation sequences of the two-layer color code.
//!
//! A sequence starts and ends in the interlayer-condensed phase `CC` and
//! passes through doubled toric-code stages, each condensing one boson per
//! layer. A layer left idle by a stage keeps its previous boson.
//!
//! Text format, one stage per line: `CC`, `[rx1]`, `[rx1,bx2]`, `[bz1?p1]`,
//! where `?name` tags a condensation as disordered with parameter `name`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::anyon::{Anyon, Color, Flavor};
use crate::automorphism::{antiswap_reflection, swap_reflection, transition_map, Automorphism};
use crate::error::{Error, Result};

/// A nontrivial boson `c sigma` of one color-code layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Boson {
    pub color: Color,
    pub flavor: Flavor,
}

impl Boson {
    pub const fn new(color: Color, flavor: Flavor) -> Boson {
        Boson { color, flavor }
    }

    /// Magic-square reading order, 0..9.
    pub const fn index(self) -> usize {
        self.color.index() * 3 + self.flavor.index()
    }

    pub const fn from_index(i: usize) -> Boson {
        Boson::new(Color::from_index(i / 3), Flavor::from_index(i % 3))
    }

    pub fn all() -> impl Iterator<Item = Boson> {
        (0..9).map(Boson::from_index)
    }

    pub const fn anyon(self) -> Anyon {
        Anyon::boson(self.color, self.flavor)
    }

    /// Distinct color and distinct flavor.
    pub fn is_semion_with(self, other: Boson) -> bool {
        self.color != other.color && self.flavor != other.flavor
    }
}

impl fmt::Display for Boson {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.color.letter(), self.flavor.letter())
    }
}

/// Layer of the doubled color code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Layer {
    One,
    Two,
}

impl Layer {
    pub const BOTH: [Layer; 2] = [Layer::One, Layer::Two];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn number(self) -> u8 {
        self as u8 + 1
    }
}

/// A boson together with the layer it is condensed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CondensedBoson {
    pub boson: Boson,
    pub layer: Layer,
}

impl fmt::Display for CondensedBoson {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.boson, self.layer.number())
    }
}

impl FromStr for CondensedBoson {
    type Err = Error;
    fn from_str(s: &str) -> Result<CondensedBoson> {
        let bad = || Error::Parse(format!("invalid condensed boson `{s}`"));
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != 3 {
            return Err(bad());
        }
        let color = Color::from_letter(chars[0]).ok_or_else(bad)?;
        let flavor = Flavor::from_letter(chars[1]).ok_or_else(bad)?;
        let layer = match chars[2] {
            '1' => Layer::One,
            '2' => Layer::Two,
            _ => return Err(bad()),
        };
        Ok(CondensedBoson {
            boson: Boson::new(color, flavor),
            layer,
        })
    }
}

/// One condensation inside a stage, optionally tagged by a disorder
/// parameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Condensation {
    pub boson: Boson,
    pub tag: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    CcTilde,
    /// Condensations for layer 1 and layer 2; at least one is present.
    TcTc([Option<Condensation>; 2]),
}

impl Stage {
    pub fn tc(first: Option<Boson>, second: Option<Boson>) -> Stage {
        let mk = |b: Option<Boson>| b.map(|boson| Condensation { boson, tag: None });
        Stage::TcTc([mk(first), mk(second)])
    }

    pub fn tag(&self) -> Option<(Layer, &str)> {
        match self {
            Stage::CcTilde => None,
            Stage::TcTc(slots) => Layer::BOTH.iter().find_map(|&l| {
                slots[l.index()]
                    .as_ref()
                    .and_then(|c| c.tag.as_deref().map(|t| (l, t)))
            }),
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::CcTilde => write!(f, "CC"),
            Stage::TcTc(slots) => {
                let parts: Vec<String> = Layer::BOTH
                    .iter()
                    .filter_map(|&l| {
                        slots[l.index()].as_ref().map(|c| {
                            let mut s = format!("{}{}", c.boson, l.number());
                            if let Some(t) = &c.tag {
                                s.push('?');
                                s.push_str(t);
                            }
                            s
                        })
                    })
                    .collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

impl FromStr for Stage {
    type Err = Error;
    fn from_str(s: &str) -> Result<Stage> {
        let t = s.trim();
        if t == "CC" {
            return Ok(Stage::CcTilde);
        }
        let body = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("invalid stage `{s}`")))?;
        let mut slots: [Option<Condensation>; 2] = [None, None];
        let mut tags = 0;
        for item in body.split(',') {
            let (b, tag) = match item.split_once('?') {
                Some((b, tag)) => {
                    let tag = tag.trim();
                    if tag.is_empty() || !tag.chars().all(|c| c.is_alphanumeric() || c == '_') {
                        return Err(Error::Parse(format!("invalid tag in `{s}`")));
                    }
                    tags += 1;
                    (b, Some(tag.to_string()))
                }
                None => (item, None),
            };
            let cb: CondensedBoson = b.parse()?;
            let slot = &mut slots[cb.layer.index()];
            if slot.is_some() {
                return Err(Error::Parse(format!("layer {} listed twice in `{s}`", cb.layer.number())));
            }
            *slot = Some(Condensation {
                boson: cb.boson,
                tag,
            });
        }
        if tags > 1 {
            return Err(Error::Parse(format!("more than one disorder tag in `{s}`")));
        }
        Ok(Stage::TcTc(slots))
    }
}

/// A doubled toric-code theory: one condensed boson per layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Theory(pub Boson, pub Boson);

impl Theory {
    /// The 24 theories adjacent to `CC`: distinct colors, flavors in {x, y}.
    pub fn boundary_theories() -> Vec<Theory> {
        let mut out = Vec::new();
        for a in Boson::all() {
            for b in Boson::all() {
                let t = Theory(a, b);
                if t.contribution().is_some() {
                    out.push(t);
                }
            }
        }
        out
    }

    /// Isomorphism contribution of a boundary theory, or `None` if the
    /// theory cannot neighbor `CC`.
    pub fn contribution(self) -> Option<Automorphism> {
        let Theory(a, b) = self;
        if a.color == b.color || a.flavor == Flavor::Z || b.flavor == Flavor::Z {
            return None;
        }
        // Color permutation sending r to the layer-1 color and b to the
        // layer-2 color.
        let c1 = a.color.index() as u8;
        let c2 = b.color.index() as u8;
        let c3 = 3 - c1 - c2;
        let mut map = [c1, c3, c2, 3, 4, 5];
        if a.flavor != b.flavor {
            map[3] = 4;
            map[4] = 3;
        }
        Some(Automorphism::from_map(map).expect("color permutation is valid"))
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}1,{}2]", self.0, self.1)
    }
}

impl FromStr for Theory {
    type Err = Error;
    fn from_str(s: &str) -> Result<Theory> {
        match s.parse::<Stage>()? {
            Stage::TcTc([Some(a), Some(b)]) if a.tag.is_none() && b.tag.is_none() => {
                Ok(Theory(a.boson, b.boson))
            }
            _ => Err(Error::Parse(format!("`{s}` is not a two-layer theory"))),
        }
    }
}

/// Result of [`MeasurementSequence::check_reversible`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Ok,
    Intralayer {
        stage: usize,
        layer: u8,
        from: String,
        to: String,
    },
    Interlayer {
        stage: usize,
        first: Option<String>,
        second: Option<String>,
    },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Ok => write!(f, "ok"),
            Verdict::Intralayer {
                stage,
                layer,
                from,
                to,
            } => write!(f, "intralayer violation at stage {stage}: {from}{layer} -> {to}{layer}"),
            Verdict::Interlayer {
                stage,
                first,
                second,
            } => write!(
                f,
                "interlayer violation at stage {stage}: layer 1 {}, layer 2 {}",
                first.as_deref().unwrap_or("none"),
                second.as_deref().unwrap_or("none")
            ),
        }
    }
}

/// Effective bosons of both layers after a stage.
pub type Effective = [Option<Boson>; 2];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MeasurementSequence {
    stages: Vec<Stage>,
}

impl MeasurementSequence {
    /// Checks the shape `CC, TcTc+, CC`.
    pub fn new(stages: Vec<Stage>) -> Result<MeasurementSequence> {
        let n = stages.len();
        if n < 3 {
            return Err(Error::InvalidSequence("need CC, at least one stage, CC".into()));
        }
        if stages[0] != Stage::CcTilde || stages[n - 1] != Stage::CcTilde {
            return Err(Error::InvalidSequence("sequence must start and end with CC".into()));
        }
        for (i, s) in stages[1..n - 1].iter().enumerate() {
            match s {
                Stage::CcTilde => {
                    return Err(Error::InvalidSequence(format!(
                        "intermediate CC at stage {} is not supported",
                        i + 1
                    )))
                }
                Stage::TcTc(slots) => {
                    if slots.iter().all(Option::is_none) {
                        return Err(Error::InvalidSequence(format!("empty stage {}", i + 1)));
                    }
                    let tags = slots.iter().flatten().filter(|c| c.tag.is_some()).count();
                    if tags > 1 {
                        return Err(Error::InvalidSequence(format!("two tags in stage {}", i + 1)));
                    }
                }
            }
        }
        Ok(MeasurementSequence { stages })
    }

    /// Wraps doubled toric-code stages between two `CC` stages.
    pub fn from_tc_stages(tc: Vec<Stage>) -> Result<MeasurementSequence> {
        let mut stages = vec![Stage::CcTilde];
        stages.extend(tc);
        stages.push(Stage::CcTilde);
        MeasurementSequence::new(stages)
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// The doubled toric-code stages, without the enclosing `CC`s.
    pub fn tc_stages(&self) -> &[Stage] {
        &self.stages[1..self.stages.len() - 1]
    }

    /// Parameter names in order of first appearance.
    pub fn parameters(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for s in &self.stages {
            if let Some((_, t)) = s.tag() {
                if !out.iter().any(|p| p == t) {
                    out.push(t.to_string());
                }
            }
        }
        out
    }

    /// Effective bosons after each doubled toric-code stage.
    pub fn effective_history(&self) -> Vec<Effective> {
        let mut cur: Effective = [None, None];
        self.tc_stages()
            .iter()
            .map(|s| {
                if let Stage::TcTc(slots) = s {
                    for l in Layer::BOTH {
                        if let Some(c) = &slots[l.index()] {
                            cur[l.index()] = Some(c.boson);
                        }
                    }
                }
                cur
            })
            .collect()
    }

    pub fn first_theory(&self) -> Option<Theory> {
        match self.effective_history().first() {
            Some([Some(a), Some(b)]) => Some(Theory(*a, *b)),
            _ => None,
        }
    }

    pub fn final_theory(&self) -> Option<Theory> {
        match self.effective_history().last() {
            Some([Some(a), Some(b)]) => Some(Theory(*a, *b)),
            _ => None,
        }
    }

    /// Reports the first reversibility violation. A layer without a boson
    /// next to `CC` counts as an interlayer violation.
    pub fn check_reversible(&self) -> Verdict {
        let history = self.effective_history();
        let boundary = |stage: usize, eff: &Effective| -> Option<Verdict> {
            let ok = matches!(eff, [Some(a), Some(b)] if Theory(*a, *b).contribution().is_some());
            (!ok).then(|| Verdict::Interlayer {
                stage,
                first: eff[0].map(|b| b.to_string()),
                second: eff[1].map(|b| b.to_string()),
            })
        };
        if let Some(v) = boundary(1, &history[0]) {
            return v;
        }
        for i in 1..history.len() {
            for l in Layer::BOTH {
                if let (Some(a), Some(b)) = (history[i - 1][l.index()], history[i][l.index()]) {
                    if a != b && !a.is_semion_with(b) {
                        return Verdict::Intralayer {
                            stage: i + 1,
                            layer: l.number(),
                            from: a.to_string(),
                            to: b.to_string(),
                        };
                    }
                }
            }
        }
        boundary(self.stages.len() - 1, history.last().expect("nonempty"))
            .unwrap_or(Verdict::Ok)
    }

    /// Effective-boson changes per layer across the doubled toric-code
    /// stages.
    pub fn change_counts(&self) -> [usize; 2] {
        let history = self.effective_history();
        let mut counts = [0, 0];
        for w in history.windows(2) {
            for l in Layer::BOTH {
                if let (Some(a), Some(b)) = (w[0][l.index()], w[1][l.index()]) {
                    if a != b {
                        counts[l.index()] += 1;
                    }
                }
            }
        }
        counts
    }

    /// The automorphism enacted by one period of a reversible sequence.
    pub fn compute_automorphism(&self) -> Result<Automorphism> {
        let verdict = self.check_reversible();
        if !verdict.is_ok() {
            return Err(Error::Irreversible(verdict.to_string()));
        }
        let missing = |what: &str| Error::Irreversible(format!("{what} theory has no isomorphism contribution"));
        let phi_i = self
            .first_theory()
            .and_then(Theory::contribution)
            .ok_or_else(|| missing("first"))?;
        let phi_f = self
            .final_theory()
            .and_then(Theory::contribution)
            .ok_or_else(|| missing("final"))?;
        let [alpha, beta] = self.change_counts();
        Ok(compile(phi_i, phi_f, alpha, beta))
    }

    /// The sequence with every condensation tagged by a parameter removed
    /// (value false) or kept untagged (value true). Emptied stages are
    /// dropped.
    pub fn materialize(&self, values: &HashMap<String, bool>) -> Result<MeasurementSequence> {
        let mut tc = Vec::new();
        for s in self.tc_stages() {
            if let Stage::TcTc(slots) = s {
                let mut out: [Option<Condensation>; 2] = [None, None];
                for l in Layer::BOTH {
                    if let Some(c) = &slots[l.index()] {
                        let keep = match &c.tag {
                            None => true,
                            Some(t) => *values
                                .get(t)
                                .ok_or_else(|| Error::Config(format!("no value for parameter `{t}`")))?,
                        };
                        if keep {
                            out[l.index()] = Some(Condensation {
                                boson: c.boson,
                                tag: None,
                            });
                        }
                    }
                }
                if out.iter().any(Option::is_some) {
                    tc.push(Stage::TcTc(out));
                }
            }
        }
        MeasurementSequence::from_tc_stages(tc)
    }
}

/// phi_f (rx)(gy)(bz)^alpha (rz)(gy)(bx)^beta phi_i^{-1}.
pub fn compile(phi_i: Automorphism, phi_f: Automorphism, alpha: usize, beta: usize) -> Automorphism {
    let mut mid = Automorphism::IDENTITY;
    if alpha % 2 == 1 {
        mid = mid.compose(swap_reflection());
    }
    if beta % 2 == 1 {
        mid = mid.compose(antiswap_reflection());
    }
    phi_f.compose(mid).compose(phi_i.inverse())
}

impl fmt::Display for MeasurementSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stages {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for MeasurementSequence {
    type Err = Error;

    /// One stage per line; `;` also separates stages. Blank lines and
    /// `#` comments are ignored.
    fn from_str(s: &str) -> Result<MeasurementSequence> {
        let stages = s
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(|l| l.split(';'))
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Stage>>>()?;
        MeasurementSequence::new(stages)
    }
}

/// Outcome at a corner of the disorder-parameter cube.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CornerOutcome {
    Fet(Automorphism),
    Irreversible(Verdict),
}

impl CornerOutcome {
    pub fn automorphism(&self) -> Option<Automorphism> {
        match self {
            CornerOutcome::Fet(a) => Some(*a),
            CornerOutcome::Irreversible(_) => None,
        }
    }

    /// `IrrP(intralayer)` / `IrrP(interlayer)` or the cycle string.
    pub fn label(&self) -> String {
        match self {
            CornerOutcome::Fet(a) => a.to_string(),
            CornerOutcome::Irreversible(Verdict::Intralayer { .. }) => "IrrP(intralayer)".into(),
            CornerOutcome::Irreversible(_) => "IrrP(interlayer)".into(),
        }
    }
}

/// A measurement sequence with at least one disorder parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisorderModel {
    sequence: MeasurementSequence,
    parameters: Vec<String>,
}

/// Corner outcomes keyed by bitstrings, character i giving parameter i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CornerTable {
    pub parameters: Vec<String>,
    pub outcomes: BTreeMap<String, CornerOutcome>,
}

impl CornerTable {
    pub fn get(&self, bits: &[u8]) -> Option<&CornerOutcome> {
        let key: String = bits.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect();
        self.outcomes.get(&key)
    }

    /// `{bitstring: label}` JSON.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .outcomes
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.label())))
            .collect();
        serde_json::Value::Object(map)
    }
}

impl DisorderModel {
    pub fn new(sequence: MeasurementSequence) -> Result<DisorderModel> {
        let parameters = sequence.parameters();
        if parameters.is_empty() {
            return Err(Error::InvalidSequence("a disorder model needs at least one tagged condensation".into()));
        }
        Ok(DisorderModel {
            sequence,
            parameters,
        })
    }

    pub fn sequence(&self) -> &MeasurementSequence {
        &self.sequence
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn parameter_index(&self, name: &str) -> Result<usize> {
        self.parameters
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::Config(format!("unknown parameter `{name}`")))
    }

    /// The branch sequence at a corner.
    pub fn corner_sequence(&self, bits: &[u8]) -> Result<MeasurementSequence> {
        if bits.len() != self.parameters.len() {
            return Err(Error::Config(format!(
                "corner has {} entries for {} parameters",
                bits.len(),
                self.parameters.len()
            )));
        }
        let values = self
            .parameters
            .iter()
            .cloned()
            .zip(bits.iter().map(|&b| b != 0))
            .collect();
        self.sequence.materialize(&values)
    }

    pub fn corner_outcome(&self, bits: &[u8]) -> Result<CornerOutcome> {
        let seq = self.corner_sequence(bits)?;
        let v = seq.check_reversible();
        Ok(if v.is_ok() {
            CornerOutcome::Fet(seq.compute_automorphism()?)
        } else {
            CornerOutcome::Irreversible(v)
        })
    }

    pub fn corner_outcomes(&self) -> Result<CornerTable> {
        let m = self.parameters.len();
        let mut outcomes = BTreeMap::new();
        for mask in 0..(1usize << m) {
            let bits: Vec<u8> = (0..m).map(|i| ((mask >> i) & 1) as u8).collect();
            let key: String = bits.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect();
            outcomes.insert(key, self.corner_outcome(&bits)?);
        }
        Ok(CornerTable {
            parameters: self.parameters.clone(),
            outcomes,
        })
    }

    /// The anyon whose string is measured along a wrapping boundary of the
    /// named parameter's disorder, expressed in the end-of-period `CC`
    /// frame. Other parameters are held at 0.
    ///
    /// The boundary string is the product of the previous and the tagged
    /// boson of that layer; it is pushed through every later condensation
    /// by choosing the representative that braids trivially with the newly
    /// condensed boson, and finally through the interlayer condensation.
    pub fn measured_anyon(&self, parameter: &str) -> Result<Anyon> {
        let idx = self.parameter_index(parameter)?;
        let m = self.parameters.len();
        let mut bits = vec![0u8; m];
        for b in [0u8, 1] {
            bits[idx] = b;
            if let CornerOutcome::Irreversible(v) = self.corner_outcome(&bits)? {
                return Err(Error::Irreversible(format!("branch {parameter}={b}: {v}")));
            }
        }
        // Branch with the parameter kept and all others removed, keeping
        // track of where the tagged condensation sits.
        let mut tc: Vec<Stage> = Vec::new();
        let mut tagged: Option<(usize, Layer)> = None;
        for s in self.sequence.tc_stages() {
            if let Stage::TcTc(slots) = s {
                let mut out: [Option<Condensation>; 2] = [None, None];
                for l in Layer::BOTH {
                    if let Some(c) = &slots[l.index()] {
                        match c.tag.as_deref() {
                            Some(t) if t == parameter => {
                                tagged.get_or_insert((tc.len(), l));
                                out[l.index()] = Some(Condensation { boson: c.boson, tag: None });
                            }
                            Some(_) => {}
                            None => out[l.index()] = Some(Condensation { boson: c.boson, tag: None }),
                        }
                    }
                }
                if out.iter().any(Option::is_some) {
                    tc.push(Stage::TcTc(out));
                }
            }
        }
        let (pos, layer) = tagged.expect("parameter occurs in the sequence");
        let seq = MeasurementSequence::from_tc_stages(tc)?;
        let history = seq.effective_history();
        let li = layer.index();
        let before = if pos == 0 { None } else { history[pos - 1][li] };
        let before = before.ok_or_else(|| {
            Error::Irreversible(format!("parameter {parameter} tags a layer with no previous boson"))
        })?;
        let tag = history[pos][li].expect("tagged layer has a boson");
        let mut anyon = [Anyon::VACUUM; 2];
        anyon[li] = before.anyon().fuse(tag.anyon());
        for w in history[pos..].windows(2) {
            for l in Layer::BOTH {
                let (a, b) = (w[0][l.index()], w[1][l.index()]);
                if let (Some(a), Some(b)) = (a, b) {
                    if a != b && anyon[l.index()].is_semion_with(b.anyon()) {
                        anyon[l.index()] = anyon[l.index()].fuse(a.anyon());
                    }
                }
            }
        }
        let last = history.last().expect("nonempty");
        let (c1, c2) = (last[0].expect("reversible").anyon(), last[1].expect("reversible").anyon());
        let deconfined = |x: [Anyon; 2]| {
            [Anyon::RZ, Anyon::GZ]
                .iter()
                .all(|z| x[0].is_semion_with(*z) == x[1].is_semion_with(*z))
        };
        let candidates = [
            anyon,
            [anyon[0].fuse(c1), anyon[1]],
            [anyon[0], anyon[1].fuse(c2)],
            [anyon[0].fuse(c1), anyon[1].fuse(c2)],
        ];
        let found: Vec<[Anyon; 2]> = candidates.into_iter().filter(|x| deconfined(*x)).collect();
        match found.as_slice() {
            [x] => Ok(interlayer_label(*x)),
            _ => Err(Error::Irreversible(format!(
                "{} deconfined representatives at the final interlayer condensation",
                found.len()
            ))),
        }
    }

    /// Transition map between the two corners of one parameter, others 0.
    pub fn parameter_transition(&self, parameter: &str) -> Result<Automorphism> {
        let idx = self.parameter_index(parameter)?;
        let mut bits = vec![0u8; self.parameters.len()];
        let a = self.corner_outcome(&bits)?;
        bits[idx] = 1;
        let b = self.corner_outcome(&bits)?;
        match (a.automorphism(), b.automorphism()) {
            (Some(a), Some(b)) => Ok(transition_map(a, b)),
            _ => Err(Error::Irreversible(format!("a branch of {parameter} is irreversible"))),
        }
    }
}

/// Label of a deconfined two-layer anyon after condensing every z1 z2
/// pair: the x-part is shared by both layers and the z-parts combine.
fn interlayer_label(x: [Anyon; 2]) -> Anyon {
    let xmask = 0b0101;
    let zmask = 0b1010;
    debug_assert_eq!(x[0].bits() & xmask, x[1].bits() & xmask);
    Anyon::from_bits((x[1].bits() & xmask) | ((x[0].bits() ^ x[1].bits()) & zmask))
}

/// Concatenates two sequences whose boundary theories match. An untagged
/// repeated boundary stage of `seq_c` is dropped.
pub fn concatenate(seq_a: &MeasurementSequence, seq_c: &MeasurementSequence) -> Result<MeasurementSequence> {
    let end = seq_a.final_theory();
    let start = seq_c.first_theory();
    if end.is_none() || end != start {
        return Err(Error::BoundaryMismatch(format!(
            "{} does not match {}",
            end.map_or("none".into(), |t| t.to_string()),
            start.map_or("none".into(), |t| t.to_string())
        )));
    }
    let mut tc: Vec<Stage> = seq_a.tc_stages().to_vec();
    let c = seq_c.tc_stages();
    let skip = usize::from(c[0].tag().is_none());
    tc.extend(c[skip..].iter().cloned());
    MeasurementSequence::from_tc_stages(tc)
}

/// Which end of a synthesized sequence is pinned to a given theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    First(Theory),
    Last(Theory),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct SearchState {
    start: u8,
    b: [u8; 2],
    parity: [u8; 2],
}

/// Predecessor and per-layer move of each visited state.
type SearchParents = HashMap<SearchState, Option<(SearchState, [Option<u8>; 2])>>;

/// Boundary theories with `[rx1,bx2]` first, then in boson order.
fn ordered_starts() -> Vec<Theory> {
    let canonical = Theory(Boson::new(Color::R, Flavor::X), Boson::new(Color::B, Flavor::X));
    let mut out = vec![canonical];
    out.extend(Theory::boundary_theories().into_iter().filter(|t| *t != canonical));
    out
}

/// Per-layer options for the next stage: keep, or move to a mutual semion.
fn moves(b: [u8; 2]) -> Vec<[Option<u8>; 2]> {
    let opts = |x: u8| -> Vec<Option<u8>> {
        let cur = Boson::from_index(x as usize);
        std::iter::once(None)
            .chain(Boson::all().filter(|n| cur.is_semion_with(*n)).map(|n| Some(n.index() as u8)))
            .collect()
    };
    let mut out = Vec::new();
    for n1 in opts(b[0]) {
        for n2 in opts(b[1]) {
            if n1.is_some() || n2.is_some() {
                out.push([n1, n2]);
            }
        }
    }
    out
}

/// Finds a shortest reversible sequence enacting `phi` by breadth-first
/// search over (start theory, effective bosons, change parities). Starts
/// are tried with `[rx1,bx2]` first and moves in boson order, so results
/// are deterministic.
pub fn synthesize_sequence(phi: Automorphism, boundary: Option<Boundary>) -> Result<MeasurementSequence> {
    synthesize_with(phi, boundary)
}

/// Variant taking both ends so callers can request the unsupported case.
pub fn synthesize_sequence_pinned(
    phi: Automorphism,
    first: Option<Theory>,
    last: Option<Theory>,
) -> Result<MeasurementSequence> {
    match (first, last) {
        (Some(_), Some(_)) => Err(Error::BothBoundaries),
        (Some(t), None) => synthesize_with(phi, Some(Boundary::First(t))),
        (None, Some(t)) => synthesize_with(phi, Some(Boundary::Last(t))),
        (None, None) => synthesize_with(phi, None),
    }
}

fn synthesize_with(phi: Automorphism, boundary: Option<Boundary>) -> Result<MeasurementSequence> {
    let starts: Vec<Theory> = match boundary {
        Some(Boundary::First(t)) => {
            if t.contribution().is_none() {
                return Err(Error::Config(format!("{t} cannot neighbor CC")));
            }
            vec![t]
        }
        Some(Boundary::Last(t)) => {
            if t.contribution().is_none() {
                return Err(Error::Config(format!("{t} cannot neighbor CC")));
            }
            ordered_starts()
        }
        None => ordered_starts(),
    };
    let target_last = match boundary {
        Some(Boundary::Last(t)) => Some(t),
        _ => None,
    };
    let mut parent: SearchParents = HashMap::new();
    let mut queue = VecDeque::new();
    for (i, t) in starts.iter().enumerate() {
        let s = SearchState {
            start: i as u8,
            b: [t.0.index() as u8, t.1.index() as u8],
            parity: [0, 0],
        };
        parent.insert(s, None);
        queue.push_back(s);
    }
    while let Some(s) = queue.pop_front() {
        let theory = Theory(Boson::from_index(s.b[0] as usize), Boson::from_index(s.b[1] as usize));
        if let Some(phi_f) = theory.contribution() {
            let phi_i = starts[s.start as usize].contribution().expect("start is a boundary theory");
            let enacted = compile(phi_i, phi_f, s.parity[0] as usize, s.parity[1] as usize);
            if enacted == phi && target_last.is_none_or(|t| t == theory) {
                return rebuild(&parent, s, &starts);
            }
        }
        for mv in moves(s.b) {
            let mut next = s;
            for l in 0..2 {
                if let Some(n) = mv[l] {
                    next.b[l] = n;
                    next.parity[l] ^= 1;
                }
            }
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                e.insert(Some((s, mv)));
                queue.push_back(next);
            }
        }
    }
    Err(Error::SynthesisFailed(format!("{phi} is unreachable under the requested boundary")))
}

fn rebuild(
    parent: &SearchParents,
    end: SearchState,
    starts: &[Theory],
) -> Result<MeasurementSequence> {
    let mut tc = Vec::new();
    let mut cur = end;
    while let Some(Some((prev, mv))) = parent.get(&cur) {
        let b = |x: Option<u8>| x.map(|i| Boson::from_index(i as usize));
        tc.push(Stage::tc(b(mv[0]), b(mv[1])));
        cur = *prev;
    }
    let t = starts[cur.start as usize];
    tc.push(Stage::tc(Some(t.0), Some(t.1)));
    tc.reverse();
    MeasurementSequence::from_tc_stages(tc)
}

/// Joint state of the two branches of a 1-component model. Before the tag
/// both branches agree; afterwards only the tagged layer's boson and the
/// change parities can differ.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Joint {
    start: u8,
    b: [u8; 2],
    par1: [u8; 2],
    tagged: u8, // 0 before the tag, else tagged layer + 1
    other: u8,  // branch-0 boson of the tagged layer
    par0: [u8; 2],
}

/// A stage move: new bosons per layer and the tagged layer, if any.
type JointMove = ([Option<u8>; 2], Option<u8>);

fn step(cur: u8, par: u8, new: Option<u8>) -> Option<(u8, u8)> {
    match new {
        None => Some((cur, par)),
        Some(n) if n == cur => Some((cur, par)),
        Some(n) if Boson::from_index(cur as usize).is_semion_with(Boson::from_index(n as usize)) => {
            Some((n, par ^ 1))
        }
        Some(_) => None,
    }
}

fn joint_successors(j: Joint) -> Vec<(Joint, JointMove)> {
    let options: Vec<Option<u8>> = std::iter::once(None).chain((0..9).map(Some)).collect();
    let mut out = Vec::new();
    for &n1 in &options {
        for &n2 in &options {
            if n1.is_none() && n2.is_none() {
                continue;
            }
            let new = [n1, n2];
            // Branch 1 applies the full stage.
            let mut b1 = j.b;
            let mut par1 = j.par1;
            let mut ok = true;
            for l in 0..2 {
                match step(b1[l], par1[l], new[l]) {
                    Some((b, p)) => {
                        b1[l] = b;
                        par1[l] = p;
                    }
                    None => ok = false,
                }
            }
            if !ok {
                continue;
            }
            if j.tagged == 0 {
                out.push((Joint { b: b1, par1, par0: par1, ..j }, (new, None)));
                for tl in 0..2 {
                    if new[tl].is_none() {
                        continue;
                    }
                    // Branch 0 skips the tagged condensation.
                    let ul = 1 - tl;
                    let mut par0 = j.par1;
                    if let Some((_, p)) = step(j.b[ul], par0[ul], new[ul]) {
                        par0[ul] = p;
                        let next = Joint {
                            start: j.start,
                            b: b1,
                            par1,
                            tagged: tl as u8 + 1,
                            other: j.b[tl],
                            par0,
                        };
                        out.push((next, (new, Some(tl as u8))));
                    }
                }
            } else {
                let tl = (j.tagged - 1) as usize;
                let ul = 1 - tl;
                let mut par0 = j.par0;
                let Some((other, p)) = step(j.other, par0[tl], new[tl]) else {
                    continue;
                };
                par0[tl] = p;
                let Some((_, p)) = step(j.b[ul], par0[ul], new[ul]) else {
                    continue;
                };
                par0[ul] = p;
                out.push((
                    Joint {
                        start: j.start,
                        b: b1,
                        par1,
                        tagged: j.tagged,
                        other,
                        par0,
                    },
                    (new, None),
                ));
            }
        }
    }
    out
}

/// Corner automorphisms (p=0, p=1) of a tagged joint state whose branches
/// can both return to `CC`.
fn joint_corners(j: Joint, starts: &[Theory]) -> Option<(Automorphism, Automorphism)> {
    if j.tagged == 0 {
        return None;
    }
    let theory = |b: [u8; 2]| Theory(Boson::from_index(b[0] as usize), Boson::from_index(b[1] as usize));
    let mut b0 = j.b;
    b0[(j.tagged - 1) as usize] = j.other;
    let f1 = theory(j.b).contribution()?;
    let f0 = theory(b0).contribution()?;
    let phi_i = starts[j.start as usize].contribution().expect("boundary theory");
    Some((
        compile(phi_i, f0, j.par0[0] as usize, j.par0[1] as usize),
        compile(phi_i, f1, j.par1[0] as usize, j.par1[1] as usize),
    ))
}

/// Breadth-first search over 1-component models from the given starts.
/// `visit` sees the corner pair of every reachable model; returning true
/// stops the search and yields that model, tagged with parameter `p`.
fn joint_search(
    starts: &[Theory],
    mut visit: impl FnMut(Automorphism, Automorphism) -> bool,
) -> Option<MeasurementSequence> {
    let mut parent: HashMap<Joint, Option<(Joint, JointMove)>> = HashMap::new();
    let mut queue = VecDeque::new();
    for (i, t) in starts.iter().enumerate() {
        let j = Joint {
            start: i as u8,
            b: [t.0.index() as u8, t.1.index() as u8],
            par1: [0, 0],
            tagged: 0,
            other: 0,
            par0: [0, 0],
        };
        parent.insert(j, None);
        queue.push_back(j);
    }
    while let Some(j) = queue.pop_front() {
        if let Some((a, b)) = joint_corners(j, starts) {
            if visit(a, b) {
                return Some(rebuild_joint(&parent, j, starts));
            }
        }
        for (next, mv) in joint_successors(j) {
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                e.insert(Some((j, mv)));
                queue.push_back(next);
            }
        }
    }
    None
}

fn rebuild_joint(
    parent: &HashMap<Joint, Option<(Joint, JointMove)>>,
    end: Joint,
    starts: &[Theory],
) -> MeasurementSequence {
    let mut tc = Vec::new();
    let mut cur = end;
    while let Some(Some((prev, (new, tag)))) = parent.get(&cur) {
        let mut slots: [Option<Condensation>; 2] = [None, None];
        for l in 0..2 {
            slots[l] = new[l].map(|i| Condensation {
                boson: Boson::from_index(i as usize),
                tag: (*tag == Some(l as u8)).then(|| "p".to_string()),
            });
        }
        tc.push(Stage::TcTc(slots));
        cur = *prev;
    }
    let t = starts[cur.start as usize];
    tc.push(Stage::tc(Some(t.0), Some(t.1)));
    tc.reverse();
    MeasurementSequence::from_tc_stages(tc).expect("search emits nonempty stages")
}

/// Exhaustively enumerates 1-component disorder models (any length, one
/// tagged condensation) through their reachable compiler states and
/// returns every corner pair (phi at p=0, phi at p=1) with both corners
/// reversible.
pub fn enumerate_one_component_pairs() -> BTreeSet<(Automorphism, Automorphism)> {
    let mut pairs = BTreeSet::new();
    joint_search(&Theory::boundary_theories(), |a, b| {
        pairs.insert((a, b));
        false
    });
    pairs
}

/// A shortest 1-component model with corners `phi_a` at p=0 and `phi_b`
/// at p=1, optionally starting from a given theory. The tag is named `p`.
pub fn find_one_component_model(
    phi_a: Automorphism,
    phi_b: Automorphism,
    first: Option<Theory>,
) -> Option<MeasurementSequence> {
    let starts = match first {
        Some(t) => vec![t],
        None => ordered_starts(),
    };
    joint_search(&starts, |a, b| a == phi_a && b == phi_b)
}
