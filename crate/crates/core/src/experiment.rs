//! Disorder-model Monte Carlo: schedules, trajectories, sweeps and their
//! CSV/JSON records.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{self, Asymptote};
use crate::anyon::{Anyon, FermionGroup, Phase};
use crate::condensation::{Layer, MeasurementSequence, Stage};
use crate::error::{Error, Result};
use crate::fet_graph::protected_algebra;
use crate::lattice::HoneycombTorus;
use crate::logical::{Direction, LogicalFactor, LogicalKind};
use crate::pauli::PauliOperator;
use crate::tableau::{StabilizerBackend, StabilizerTableau};

/// A logical string to track: `X3`, `F:X~1`, `F':Z~2` or `rx*bz@v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Observable {
    pub name: String,
    pub anyon: Anyon,
    pub direction: Direction,
}

impl FromStr for Observable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Observable> {
        let name = s.trim().to_string();
        let bad = || Error::Config(format!("invalid observable `{s}`"));
        if let Some((a, d)) = name.split_once('@') {
            return Ok(Observable {
                anyon: a.parse().map_err(|_| bad())?,
                direction: d.parse().map_err(|_| bad())?,
                name,
            });
        }
        if let Some((g, op)) = name.split_once(':') {
            let group = match g {
                "F" => FermionGroup::F,
                "F'" => FermionGroup::FPrime,
                _ => return Err(bad()),
            };
            let row = protected_algebra(group).into_iter().find(|r| r.name == op).ok_or_else(bad)?;
            return Ok(Observable {
                anyon: row.anyon,
                direction: row.direction,
                name,
            });
        }
        let mut chars = name.chars();
        let kind = match chars.next() {
            Some('X') => LogicalKind::X,
            Some('Z') => LogicalKind::Z,
            _ => return Err(bad()),
        };
        let q: u8 = chars.as_str().parse().map_err(|_| bad())?;
        if !(1..=4).contains(&q) {
            return Err(bad());
        }
        let (anyon, direction) = LogicalFactor::new(kind, q).string();
        Ok(Observable {
            anyon,
            direction,
            name,
        })
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Serialize for Observable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name)
    }
}

impl<'de> Deserialize<'de> for Observable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Observable, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// Maximally mixed codestate of the condensed code.
    Mixed,
    /// +1 eigenstate of X1..X4.
    Plus,
    /// +1 eigenstate of the listed logical strings, mixed otherwise.
    Custom(Vec<Observable>),
}

/// Parameter points to visit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointSpec {
    /// Cartesian product of per-parameter value lists.
    Grid { axes: Vec<Vec<f64>> },
    /// origin + s * direction for each s in values.
    Trajectory {
        origin: Vec<f64>,
        direction: Vec<f64>,
        values: Vec<f64>,
    },
    List { points: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Point {
    pub p: Vec<f64>,
    /// Position along a trajectory.
    pub coordinate: Option<f64>,
}

impl PointSpec {
    pub fn points(&self) -> Vec<Point> {
        match self {
            PointSpec::Grid { axes } => {
                let mut out = vec![Vec::new()];
                for axis in axes {
                    out = out
                        .into_iter()
                        .flat_map(|prefix: Vec<f64>| {
                            axis.iter().map(move |&v| {
                                let mut p = prefix.clone();
                                p.push(v);
                                p
                            })
                        })
                        .collect();
                }
                out.into_iter().map(|p| Point { p, coordinate: None }).collect()
            }
            PointSpec::Trajectory {
                origin,
                direction,
                values,
            } => values
                .iter()
                .map(|&s| Point {
                    p: origin.iter().zip(direction).map(|(o, d)| o + s * d).collect(),
                    coordinate: Some(s),
                })
                .collect(),
            PointSpec::List { points } => points
                .iter()
                .map(|p| Point {
                    p: p.clone(),
                    coordinate: None,
                })
                .collect(),
        }
    }
}

fn default_eps() -> f64 {
    0.1
}

fn default_bootstrap() -> usize {
    100
}

fn default_init() -> InitialState {
    InitialState::Mixed
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Measurement sequence text, one stage per line or `;`-separated.
    pub model: String,
    #[serde(rename = "L")]
    pub size: usize,
    pub repetitions: usize,
    /// T'.
    pub periods: usize,
    pub seed: u64,
    #[serde(default = "default_init")]
    pub init: InitialState,
    #[serde(default)]
    pub observables: Vec<Observable>,
    #[serde(default)]
    pub lambdas: Vec<usize>,
    pub points: PointSpec,
    /// Fixed S_inf for decay fits; the tail mean of the last quarter when
    /// absent.
    #[serde(default)]
    pub asymptote: Option<f64>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<ExperimentConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        ExperimentConfig::from_toml(&text)
    }

    pub fn sequence(&self) -> Result<MeasurementSequence> {
        self.model.parse().map_err(|e: Error| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let seq = self.sequence()?;
        let m = seq.parameters().len();
        HoneycombTorus::new(self.size).map_err(|e| Error::Config(e.to_string()))?;
        if self.repetitions == 0 || self.periods == 0 {
            return Err(Error::Config("repetitions and periods must be positive".into()));
        }
        for &l in &self.lambdas {
            if l == 0 || !self.periods.is_multiple_of(l) {
                return Err(Error::Config(format!("periods {} is not a multiple of {l}", self.periods)));
            }
        }
        let points = self.points.points();
        if points.is_empty() {
            return Err(Error::Config("no parameter points".into()));
        }
        for pt in &points {
            if pt.p.len() != m {
                return Err(Error::Config(format!("point {:?} has {} entries for {m} parameters", pt.p, pt.p.len())));
            }
            if pt.p.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::Config(format!("point {:?} leaves [0, 1]", pt.p)));
            }
        }
        Ok(())
    }
}

/// A measurement of one period.
#[derive(Clone, Debug)]
pub struct ScheduledOp {
    pub op: PauliOperator,
    /// Index of the disorder parameter gating it.
    pub tag: Option<usize>,
    /// Lattice link of a hopping operator.
    pub link: Option<usize>,
}

/// One period's measurements, stage by stage.
#[derive(Clone, Debug)]
pub struct Schedule {
    pub lattice: HoneycombTorus,
    pub parameters: Vec<String>,
    stages: Vec<Vec<ScheduledOp>>,
}

impl Schedule {
    pub fn new(seq: &MeasurementSequence, size: usize) -> Result<Schedule> {
        let lattice = HoneycombTorus::new(size)?;
        let parameters = seq.parameters();
        let mut stages = Vec::new();
        for stage in seq.tc_stages() {
            let Stage::TcTc(slots) = stage else { continue };
            let mut ops = Vec::new();
            for layer in Layer::BOTH {
                if let Some(cond) = &slots[layer.index()] {
                    let tag = cond.tag.as_ref().map(|t| parameters.iter().position(|p| p == t).expect("tag is a parameter"));
                    ops.extend(lattice.links_of_color(cond.boson.color).into_iter().map(|e| ScheduledOp {
                        op: lattice.hopping_operator(cond.boson, layer, e),
                        tag,
                        link: Some(e),
                    }));
                }
            }
            stages.push(ops);
        }
        stages.push(
            lattice
                .interlayer_links()
                .into_iter()
                .map(|op| ScheduledOp { op, tag: None, link: None })
                .collect(),
        );
        Ok(Schedule {
            lattice,
            parameters,
            stages,
        })
    }

    pub fn measurements_per_period(&self) -> usize {
        self.stages.iter().map(Vec::len).sum()
    }

    pub fn stages(&self) -> &[Vec<ScheduledOp>] {
        &self.stages
    }

    /// One period; a tagged operator is measured with probability p of
    /// its parameter, drawn from `disorder` for every link.
    pub fn run_period<B: StabilizerBackend, R: Rng>(&self, state: &mut B, p: &[f64], disorder: &mut R, outcomes: &mut R) {
        self.run_period_with(state, |s| s.tag.is_none_or(|i| disorder.gen::<f64>() < p[i]), outcomes);
    }

    /// One period measuring the operators `keep` accepts, in order.
    pub fn run_period_with<B: StabilizerBackend, R: Rng>(
        &self,
        state: &mut B,
        mut keep: impl FnMut(&ScheduledOp) -> bool,
        outcomes: &mut R,
    ) {
        for s in self.stages.iter().flatten() {
            if keep(s) {
                state.measure_untracked(&s.op, outcomes);
            }
        }
    }

    /// Prepares the initial state on an empty tableau.
    pub fn initialize<B: StabilizerBackend, R: Rng>(&self, state: &mut B, init: &InitialState, outcomes: &mut R) -> Result<()> {
        let lat = &self.lattice;
        for op in lat.plaquette_operators().iter().chain(&lat.interlayer_links()) {
            state.measure_untracked(op, outcomes);
        }
        if state.entropy() != 4 {
            return Err(Error::Unsupported(format!("initial entropy {} instead of 4", state.entropy())));
        }
        let targets: Vec<(Anyon, Direction)> = match init {
            InitialState::Mixed => Vec::new(),
            InitialState::Plus => (1..=4).map(|q| LogicalFactor::new(LogicalKind::X, q).string()).collect(),
            InitialState::Custom(obs) => obs.iter().map(|o| (o.anyon, o.direction)).collect(),
        };
        for (a, d) in targets {
            state.measure_postselect(&lat.logical_string(a, d), Phase::Plus)?;
        }
        Ok(())
    }
}

/// Entropy and squared expectations at t = 0..=T'.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    pub seed: u64,
    pub entropy: Vec<u32>,
    /// Per observable.
    pub g: Vec<Vec<u8>>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of one (point, repetition) task.
pub fn task_seed(master: u64, point: usize, rep: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ point as u64) ^ rep as u64)
}

/// Independent disorder and outcome streams of one task.
pub fn task_rngs(seed: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    let mut disorder = ChaCha8Rng::seed_from_u64(seed);
    disorder.set_stream(0);
    let mut outcomes = ChaCha8Rng::seed_from_u64(seed);
    outcomes.set_stream(1);
    (disorder, outcomes)
}

/// Runs one trajectory on a fresh backend.
pub fn run_trajectory<B: StabilizerBackend>(
    schedule: &Schedule,
    mut state: B,
    p: &[f64],
    init: &InitialState,
    observables: &[PauliOperator],
    periods: usize,
    seed: u64,
) -> Result<Trajectory> {
    let (mut disorder, mut outcomes) = task_rngs(seed);
    schedule.initialize(&mut state, init, &mut outcomes)?;
    let mut traj = Trajectory {
        seed,
        entropy: Vec::with_capacity(periods + 1),
        g: vec![Vec::with_capacity(periods + 1); observables.len()],
    };
    let record = |state: &B, traj: &mut Trajectory| {
        traj.entropy.push(state.entropy() as u32);
        for (k, o) in observables.iter().enumerate() {
            traj.g[k].push(state.expectation_squared(o));
        }
    };
    record(&state, &mut traj);
    for _ in 0..periods {
        schedule.run_period(&mut state, p, &mut disorder, &mut outcomes);
        record(&state, &mut traj);
    }
    Ok(traj)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitSummary {
    pub gamma: Option<f64>,
    pub gamma_err: Option<f64>,
    /// Serialized as null when infinite.
    pub tau: Option<f64>,
    pub s_inf: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointSummary {
    pub index: usize,
    pub p: Vec<f64>,
    pub coordinate: Option<f64>,
    pub mean_entropy: Vec<f64>,
    pub entropy_err: Vec<f64>,
    /// Count of repetitions by final entropy.
    pub final_entropy: BTreeMap<u32, usize>,
    pub min_entropy: u32,
    pub fit: FitSummary,
    pub mean_g: BTreeMap<String, Vec<f64>>,
    /// g(lambda) of the mean G series over t < T'.
    pub fourier: BTreeMap<String, BTreeMap<usize, f64>>,
    /// Standard error of g(lambda) across repetitions.
    pub fourier_err: BTreeMap<String, BTreeMap<usize, f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointRecord {
    pub point: Point,
    pub trajectories: Vec<Trajectory>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub model: String,
    #[serde(rename = "L")]
    pub size: usize,
    pub repetitions: usize,
    pub periods: usize,
    pub seed: u64,
    pub parameters: Vec<String>,
    pub observables: Vec<String>,
    pub lambdas: Vec<usize>,
    pub points: Vec<PointSummary>,
}

pub struct Experiment {
    pub config: ExperimentConfig,
    pub schedule: Schedule,
    observables: Vec<PauliOperator>,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Experiment> {
        config.validate()?;
        let schedule = Schedule::new(&config.sequence()?, config.size)?;
        let observables = config
            .observables
            .iter()
            .map(|o| schedule.lattice.logical_string(o.anyon, o.direction))
            .collect();
        Ok(Experiment {
            config,
            schedule,
            observables,
        })
    }

    pub fn observable_operators(&self) -> &[PauliOperator] {
        &self.observables
    }

    pub fn run_point(&self, index: usize, point: &Point) -> Result<PointRecord> {
        let cfg = &self.config;
        let trajectories = (0..cfg.repetitions)
            .into_par_iter()
            .map(|rep| {
                run_trajectory(
                    &self.schedule,
                    StabilizerTableau::new(self.schedule.lattice.num_qubits()),
                    &point.p,
                    &cfg.init,
                    &self.observables,
                    cfg.periods,
                    task_seed(cfg.seed, index, rep),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PointRecord {
            point: point.clone(),
            trajectories,
        })
    }

    /// All points, in configuration order.
    pub fn sweep(&self) -> Result<Vec<PointRecord>> {
        self.config
            .points
            .points()
            .iter()
            .enumerate()
            .map(|(i, pt)| self.run_point(i, pt))
            .collect()
    }

    pub fn summarize_point(&self, index: usize, rec: &PointRecord) -> Result<PointSummary> {
        let cfg = &self.config;
        let rows: Vec<Vec<f64>> = rec
            .trajectories
            .iter()
            .map(|t| t.entropy.iter().map(|&s| s as f64).collect())
            .collect();
        let mean_entropy = analysis::mean_series(&rows);
        let entropy_err = (0..=cfg.periods)
            .map(|t| analysis::std_err(&rows.iter().map(|r| r[t]).collect::<Vec<_>>()))
            .collect();
        let mut final_entropy = BTreeMap::new();
        for t in &rec.trajectories {
            *final_entropy.entry(*t.entropy.last().expect("nonempty")).or_insert(0) += 1;
        }
        let min_entropy = rec.trajectories.iter().flat_map(|t| t.entropy.iter().copied()).min().unwrap_or(0);
        let asymptote = match cfg.asymptote {
            Some(v) => Asymptote::Fixed(v),
            None => Asymptote::TailMean((cfg.periods / 4).max(1)),
        };
        let fit = fit_summary(&rows, asymptote, cfg.eps, cfg.bootstrap, task_seed(cfg.seed, index, usize::MAX));
        let mut mean_g = BTreeMap::new();
        let mut fourier = BTreeMap::new();
        let mut fourier_err = BTreeMap::new();
        for (k, o) in cfg.observables.iter().enumerate() {
            let g_rows: Vec<Vec<f64>> = rec
                .trajectories
                .iter()
                .map(|t| t.g[k].iter().map(|&v| v as f64).collect())
                .collect();
            let mean = analysis::mean_series(&g_rows);
            let mut comps = BTreeMap::new();
            let mut errs = BTreeMap::new();
            for &l in &cfg.lambdas {
                comps.insert(l, analysis::fourier_g(&mean[..cfg.periods], l)?);
                let per_rep: Vec<f64> = g_rows
                    .iter()
                    .map(|r| analysis::fourier_g(&r[..cfg.periods], l))
                    .collect::<Result<_>>()?;
                errs.insert(l, analysis::std_err(&per_rep));
            }
            mean_g.insert(o.name.clone(), mean);
            fourier.insert(o.name.clone(), comps);
            fourier_err.insert(o.name.clone(), errs);
        }
        Ok(PointSummary {
            index,
            p: rec.point.p.clone(),
            coordinate: rec.point.coordinate,
            mean_entropy,
            entropy_err,
            final_entropy,
            min_entropy,
            fit,
            mean_g,
            fourier,
            fourier_err,
        })
    }

    pub fn summarize(&self, records: &[PointRecord]) -> Result<ExperimentSummary> {
        let cfg = &self.config;
        Ok(ExperimentSummary {
            model: cfg.model.clone(),
            size: cfg.size,
            repetitions: cfg.repetitions,
            periods: cfg.periods,
            seed: cfg.seed,
            parameters: self.schedule.parameters.clone(),
            observables: cfg.observables.iter().map(|o| o.name.clone()).collect(),
            lambdas: cfg.lambdas.clone(),
            points: records
                .iter()
                .enumerate()
                .map(|(i, r)| self.summarize_point(i, r))
                .collect::<Result<_>>()?,
        })
    }

    /// Header: point, one column per parameter, rep, seed, t, S, then
    /// `G:<observable>` per observable.
    pub fn write_csv<W: Write>(&self, records: &[PointRecord], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["point".to_string()];
        header.extend(self.schedule.parameters.iter().cloned());
        header.extend(["rep", "seed", "t", "S"].map(String::from));
        header.extend(self.config.observables.iter().map(|o| format!("G:{}", o.name)));
        w.write_record(&header)?;
        for (i, rec) in records.iter().enumerate() {
            for (rep, traj) in rec.trajectories.iter().enumerate() {
                for t in 0..traj.entropy.len() {
                    let mut row = vec![i.to_string()];
                    row.extend(rec.point.p.iter().map(|v| v.to_string()));
                    row.extend([rep.to_string(), traj.seed.to_string(), t.to_string(), traj.entropy[t].to_string()]);
                    row.extend(traj.g.iter().map(|g| g[t].to_string()));
                    w.write_record(&row)?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Decay fit of the mean entropy with a bootstrap error over repetitions.
pub fn fit_summary(rows: &[Vec<f64>], asymptote: Asymptote<f64>, eps: f64, resamples: usize, seed: u64) -> FitSummary {
    let mean = analysis::mean_series(rows);
    match analysis::fit_decay(&mean, asymptote, eps) {
        Ok(fit) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let gamma_err = analysis::bootstrap_std(rows, resamples, &mut rng, |sample| {
                analysis::fit_decay(&analysis::mean_series(sample), asymptote, eps).ok().map(|f| f.gamma)
            });
            FitSummary {
                gamma: Some(fit.gamma),
                gamma_err: gamma_err.is_finite().then_some(gamma_err),
                tau: fit.tau.is_finite().then_some(fit.tau),
                s_inf: Some(fit.s_inf),
                error: None,
            }
        }
        Err(e) => FitSummary {
            gamma: None,
            gamma_err: None,
            tau: None,
            s_inf: None,
            error: Some(e.to_string()),
        },
    }
}

/// Entropy series of one point read back from a trajectory CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecordedPoint {
    pub point: usize,
    pub parameters: Vec<String>,
    pub p: Vec<f64>,
    /// One series per repetition, in repetition order.
    pub entropy: Vec<Vec<f64>>,
}

fn csv_field<T: FromStr>(rec: &csv::StringRecord, i: usize, name: &str) -> Result<T> {
    rec.get(i)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Config(format!("bad `{name}` field in row {:?}", rec.position().map(|p| p.line()))))
}

/// Parses the output of [`Experiment::write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<RecordedPoint>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("missing column `{name}`")))
    };
    if header.first().map(String::as_str) != Some("point") {
        return Err(Error::Config("first column must be `point`".into()));
    }
    let (rep_col, t_col, s_col) = (col("rep")?, col("t")?, col("S")?);
    let parameters = header[1..rep_col].to_vec();
    let mut points: BTreeMap<usize, RecordedPoint> = BTreeMap::new();
    for rec in r.records() {
        let rec = rec?;
        let point: usize = csv_field(&rec, 0, "point")?;
        let rep: usize = csv_field(&rec, rep_col, "rep")?;
        let t: usize = csv_field(&rec, t_col, "t")?;
        let s: f64 = csv_field(&rec, s_col, "S")?;
        let p = (1..rep_col)
            .map(|i| csv_field(&rec, i, &header[i]))
            .collect::<Result<Vec<f64>>>()?;
        let entry = points.entry(point).or_insert_with(|| RecordedPoint {
            point,
            parameters: parameters.clone(),
            p,
            entropy: Vec::new(),
        });
        if entry.entropy.len() <= rep {
            entry.entropy.resize(rep + 1, Vec::new());
        }
        let series = &mut entry.entropy[rep];
        if series.len() != t {
            return Err(Error::Config(format!("point {point} rep {rep}: t = {t} out of order")));
        }
        series.push(s);
    }
    for pt in points.values() {
        let len = pt.entropy.first().map_or(0, Vec::len);
        if pt.entropy.iter().any(|r| r.len() != len || r.is_empty()) {
            return Err(Error::Config(format!("point {} has ragged or missing repetitions", pt.point)));
        }
    }
    Ok(points.into_values().collect())
}
