use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dacode::analysis::{estimate_criticality, fourier_g};
use dacode::anyon::Color;
use dacode::automorphism::{Automorphism, ClassId};
use dacode::condensation::{synthesize_sequence_pinned, DisorderModel, MeasurementSequence, Theory};
use dacode::error::{Error, Result};
use dacode::experiment::{fit_summary, read_csv, Experiment, ExperimentConfig};
use dacode::fet_graph::{adjacency_witness, classify_m_component, logically_connected, FetGraph};
use dacode::percolation::{self, contract};
use dacode::{Asymptote, CollapsePoint, CollapseSearch};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "dacode", version, about = "Disordered dynamic-automorphism color code toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Automorphism group queries.
    Algebra {
        #[command(subcommand)]
        query: AlgebraQuery,
    },
    /// Measurement-sequence compiler.
    Sequence {
        #[command(subcommand)]
        action: SequenceAction,
    },
    /// FET adjacency graph.
    Graph {
        #[command(subcommand)]
        query: GraphQuery,
    },
    /// Runs the stabilizer Monte Carlo described by a TOML config.
    Simulate {
        config: PathBuf,
        /// Trajectory CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// JSON summary; stdout when absent.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Wrapping-probability scan on a contracted superlattice.
    Percolation {
        /// Disordered link colors: one letter for triangular, two for kagome.
        #[arg(long)]
        colors: String,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        p_min: f64,
        #[arg(long)]
        p_max: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
        #[arg(long, default_value_t = 10000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Half-width of the collapse window around the crossing.
        #[arg(long, default_value_t = 0.03)]
        window: f64,
    },
    /// Post-processes recorded CSV files.
    Fit {
        #[command(subcommand)]
        target: FitTarget,
    },
}

#[derive(Subcommand)]
enum AlgebraQuery {
    /// Class table with sizes, log2 D^2 and IMS counts.
    Census,
    /// Class and invariants of one automorphism.
    Class { phi: String },
    /// Anyons localized on a domain wall between an automorphism and the identity.
    Localized { phi: String },
    /// Invariant mutual-semion pairs.
    Ims { phi: String },
}

#[derive(Subcommand)]
enum SequenceAction {
    /// Reversibility check.
    Validate { sequence: String },
    /// Automorphism enacted by a fixed sequence.
    Compute { sequence: String },
    /// Shortest sequence enacting an automorphism.
    Synthesize {
        phi: String,
        #[arg(long)]
        first: Option<String>,
        #[arg(long)]
        last: Option<String>,
    },
    /// Corner table and protection class of a disorder model.
    Corners { sequence: String },
}

#[derive(Subcommand)]
enum GraphQuery {
    Adjacent {
        a: String,
        b: String,
        /// Also print a 1-component witness model.
        #[arg(long)]
        witness: bool,
    },
    Distance { a: String, b: String },
    LogicalConnectivity { a: String, b: String },
    Export {
        #[arg(long, value_enum, default_value_t = ExportFormat::Dot)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Csv,
}

#[derive(Subcommand)]
enum FitTarget {
    /// Decay fits of trajectory CSVs, with a collapse when several sizes are given.
    Entropy {
        /// `L=path` pairs.
        #[arg(long = "file", required = true)]
        files: Vec<String>,
        /// Parameter used as the collapse abscissa.
        #[arg(long)]
        coordinate: Option<String>,
        #[arg(long)]
        asymptote: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 100)]
        bootstrap: usize,
        /// Fourier periods of the mean entropy to report.
        #[arg(long, value_delimiter = ',')]
        lambdas: Vec<usize>,
    },
    /// Crossing and collapse of a percolation CSV.
    Percolation {
        csv: PathBuf,
        #[arg(long, default_value_t = 0.03)]
        window: f64,
    },
}

fn automorphism(s: &str) -> Result<Automorphism> {
    s.parse()
}

/// Reads a sequence given inline or as a file path.
fn sequence(s: &str) -> Result<MeasurementSequence> {
    let path = Path::new(s);
    if path.is_file() {
        std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{s}: {e}")))?
            .parse()
    } else {
        s.parse()
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn class_json(phi: Automorphism) -> Value {
    let info = phi.class().info();
    json!({
        "automorphism": phi.to_string(),
        "class": phi.class().to_string(),
        "class_size": info.size,
        "parity": format!("{:?}", phi.s3s3_parity()),
        "log2_d2": info.log2_d2,
        "ims": info.ims,
    })
}

fn algebra(q: AlgebraQuery) -> Result<Value> {
    Ok(match q {
        AlgebraQuery::Census => {
            let all = Automorphism::all();
            let classes: Vec<Value> = ClassId::ALL
                .iter()
                .map(|&c| {
                    let info = c.info();
                    json!({
                        "class": c.to_string(),
                        "cycle_type": info.cycle_type,
                        "example": info.example,
                        "size": all.iter().filter(|a| a.class() == c).count(),
                        "log2_d2": info.log2_d2,
                        "ims": info.ims,
                    })
                })
                .collect();
            json!({ "automorphisms": all.len(), "classes": classes })
        }
        AlgebraQuery::Class { phi } => class_json(automorphism(&phi)?),
        AlgebraQuery::Localized { phi } => {
            let phi = automorphism(&phi)?;
            let anyons: Vec<String> = phi.localized_anyons().iter().map(|a| a.to_string()).collect();
            json!({ "automorphism": phi.to_string(), "localized": anyons })
        }
        AlgebraQuery::Ims { phi } => {
            let phi = automorphism(&phi)?;
            let pairs: Vec<[String; 2]> = phi
                .invariant_mutual_semion_pairs()
                .iter()
                .map(|(a, b)| [a.to_string(), b.to_string()])
                .collect();
            json!({ "automorphism": phi.to_string(), "ims": pairs })
        }
    })
}

fn sequence_cmd(a: SequenceAction) -> Result<Value> {
    Ok(match a {
        SequenceAction::Validate { sequence: s } => {
            let v = sequence(&s)?.check_reversible();
            json!({ "reversible": v.is_ok(), "verdict": v.to_string() })
        }
        SequenceAction::Compute { sequence: s } => {
            let seq = sequence(&s)?;
            if !seq.parameters().is_empty() {
                return Err(Error::Config("sequence has disorder tags; use `sequence corners`".into()));
            }
            class_json(seq.compute_automorphism()?)
        }
        SequenceAction::Synthesize { phi, first, last } => {
            let theory = |t: Option<String>| t.map(|t| t.parse::<Theory>()).transpose();
            let seq = synthesize_sequence_pinned(automorphism(&phi)?, theory(first)?, theory(last)?)?;
            let stages: Vec<String> = seq.stages().iter().map(|s| s.to_string()).collect();
            json!({ "automorphism": phi, "sequence": stages.join("; ") })
        }
        SequenceAction::Corners { sequence: s } => {
            let model = DisorderModel::new(sequence(&s)?)?;
            let table = model.corner_outcomes()?;
            let protection = classify_m_component(&model)?;
            let measured: Vec<Value> = model
                .parameters()
                .iter()
                .map(|p| match model.measured_anyon(p) {
                    Ok(a) => json!({ "parameter": p, "anyon": a.to_string() }),
                    Err(e) => json!({ "parameter": p, "error": e.to_string() }),
                })
                .collect();
            json!({
                "parameters": model.parameters(),
                "corners": table.to_json(),
                "protection": protection,
                "measured": measured,
                "superlattice": percolation::contraction_colors(model.sequence())
                    .map(|c| c.iter().map(|c| c.letter().to_string()).collect::<Vec<_>>()),
            })
        }
    })
}

fn graph(q: GraphQuery) -> Result<Value> {
    Ok(match q {
        GraphQuery::Adjacent { a, b, witness } => {
            let (a, b) = (automorphism(&a)?, automorphism(&b)?);
            let adjacent = dacode::fet_graph::adjacent(a, b);
            let mut v = json!({ "a": a.to_string(), "b": b.to_string(), "adjacent": adjacent });
            if witness && adjacent {
                let model = adjacency_witness(a, b)?;
                let stages: Vec<String> = model.sequence().stages().iter().map(|s| s.to_string()).collect();
                v["witness"] = json!(stages.join("; "));
            }
            v
        }
        GraphQuery::Distance { a, b } => {
            let (a, b) = (automorphism(&a)?, automorphism(&b)?);
            json!({ "a": a.to_string(), "b": b.to_string(), "distance": FetGraph::build().distance(a, b) })
        }
        GraphQuery::LogicalConnectivity { a, b } => {
            let (a, b) = (automorphism(&a)?, automorphism(&b)?);
            json!({ "a": a.to_string(), "b": b.to_string(), "certificate": logically_connected(a, b) })
        }
        GraphQuery::Export { format, out } => {
            let g = FetGraph::build();
            let mut w = output(out.as_deref())?;
            match format {
                ExportFormat::Dot => w.write_all(g.to_dot().as_bytes())?,
                ExportFormat::Csv => g.write_distance_csv(&mut w)?,
            }
            w.flush()?;
            return Ok(Value::Null);
        }
    })
}

fn simulate(config: &Path, csv: Option<&Path>, summary: Option<&Path>) -> Result<()> {
    let ex = Experiment::new(ExperimentConfig::load(config)?)?;
    let records = ex.sweep()?;
    if let Some(p) = csv {
        ex.write_csv(&records, BufWriter::new(File::create(p)?))?;
    }
    let mut w = output(summary)?;
    serde_json::to_writer_pretty(&mut w, &ex.summarize(&records)?)?;
    writeln!(w)?;
    Ok(())
}

fn colors(s: &str) -> Result<Vec<Color>> {
    s.chars()
        .filter(|c| !matches!(c, ',' | ' '))
        .map(|c| Color::from_letter(c).ok_or_else(|| Error::Config(format!("unknown color `{c}`"))))
        .collect()
}

fn collapse_search(lo: f64, hi: f64) -> CollapseSearch {
    CollapseSearch {
        pc_range: (lo, hi),
        ..Default::default()
    }
}

#[allow(clippy::too_many_arguments)]
fn percolation_cmd(
    colors_arg: &str,
    sizes: &[usize],
    p_min: f64,
    p_max: f64,
    points: usize,
    samples: usize,
    seed: u64,
    csv: Option<&Path>,
    window: f64,
) -> Result<Value> {
    let cs = colors(colors_arg)?;
    if !(0.0..=1.0).contains(&p_min) || !(p_min..=1.0).contains(&p_max) || points < 2 {
        return Err(Error::Config("need 0 <= p_min <= p_max <= 1 and at least two points".into()));
    }
    for &l in sizes {
        contract(&dacode::lattice::HoneycombTorus::new(l).map_err(|e| Error::Config(e.to_string()))?, &cs)
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let ps: Vec<f64> = (0..points)
        .map(|k| p_min + (p_max - p_min) * k as f64 / (points - 1) as f64)
        .collect();
    let rows = percolation::scan(&cs, sizes, &ps, samples, seed)?;
    if let Some(p) = csv {
        percolation::write_csv(&rows, BufWriter::new(File::create(p)?))?;
    }
    let est = percolation::estimate(&rows, window, &collapse_search(p_min, p_max))?;
    Ok(serde_json::to_value(est)?)
}

fn fit(t: FitTarget) -> Result<Value> {
    match t {
        FitTarget::Entropy {
            files,
            coordinate,
            asymptote,
            eps,
            bootstrap,
            lambdas,
        } => {
            let mut out = Vec::new();
            let mut collapse = Vec::new();
            for spec in &files {
                let (l, path) = spec
                    .split_once('=')
                    .ok_or_else(|| Error::Config(format!("expected L=path, got `{spec}`")))?;
                let size: usize = l.parse().map_err(|_| Error::Config(format!("bad size `{l}`")))?;
                for pt in read_csv(open(Path::new(path))?)? {
                    let periods = pt.entropy[0].len() - 1;
                    let asym = match asymptote {
                        Some(v) => Asymptote::Fixed(v),
                        None => Asymptote::TailMean((periods / 4).max(1)),
                    };
                    let f = fit_summary(&pt.entropy, asym, eps, bootstrap, pt.point as u64);
                    let mean = dacode::analysis::mean_series(&pt.entropy);
                    let fourier = lambdas
                        .iter()
                        .map(|&l| fourier_g(&mean[..periods], l).map(|g| (l.to_string(), json!(g))))
                        .collect::<Result<serde_json::Map<String, Value>>>();
                    let x = match &coordinate {
                        Some(name) => Some(
                            pt.parameters
                                .iter()
                                .position(|p| p == name)
                                .map(|i| pt.p[i])
                                .ok_or_else(|| Error::Config(format!("no parameter `{name}`")))?,
                        ),
                        None => None,
                    };
                    if let (Some(x), Some(g), Some(e)) = (x, f.gamma, f.gamma_err) {
                        collapse.push(CollapsePoint { size, p: x, y: g, err: e });
                    }
                    out.push(json!({ "L": size, "point": pt.point, "p": pt.p, "fit": f, "fourier": fourier? }));
                }
            }
            let crit = if coordinate.is_some() {
                let lo = collapse.iter().map(|c| c.p).fold(f64::INFINITY, f64::min);
                let hi = collapse.iter().map(|c| c.p).fold(f64::NEG_INFINITY, f64::max);
                match estimate_criticality(&collapse, &collapse_search(lo, hi)) {
                    Ok(c) => json!(c),
                    Err(e) => json!({ "error": e.to_string() }),
                }
            } else {
                Value::Null
            };
            Ok(json!({ "points": out, "criticality": crit }))
        }
        FitTarget::Percolation { csv, window } => {
            let rows = percolation::read_csv(open(&csv)?)?;
            let lo = rows.iter().map(|r| r.p).fold(f64::INFINITY, f64::min);
            let hi = rows.iter().map(|r| r.p).fold(f64::NEG_INFINITY, f64::max);
            Ok(serde_json::to_value(percolation::estimate(&rows, window, &collapse_search(lo, hi))?)?)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let value = match cli.command {
        Command::Algebra { query } => algebra(query)?,
        Command::Sequence { action } => sequence_cmd(action)?,
        Command::Graph { query } => graph(query)?,
        Command::Simulate { config, csv, summary } => {
            simulate(&config, csv.as_deref(), summary.as_deref())?;
            Value::Null
        }
        Command::Percolation {
            colors,
            sizes,
            p_min,
            p_max,
            points,
            samples,
            seed,
            csv,
            window,
        } => percolation_cmd(&colors, &sizes, p_min, p_max, points, samples, seed, csv.as_deref(), window)?,
        Command::Fit { target } => fit(target)?,
    };
    if !value.is_null() {
        println!("{}", serde_json::to_string_pretty(&value)?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 1 } else { 2 })
        }
    }
}
