mod common;

use common::fixtures::{EX1, EXAMPLE, RGB};
use dacode::anyon::Anyon;
use dacode::condensation::DisorderModel;
use dacode::error::Error;
use dacode::experiment::*;
use dacode::logical::Direction;
use dacode::tableau::{Membership, StabilizerBackend, StabilizerTableau};
use proptest::prelude::*;

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_toml(text).unwrap()
}

const BASE: &str = r#"
model = "CC; [rx1,bx2]; [gz1,gy2]; [by1?p1]; [rx1,bx2]; [gy2?p2]; CC"
L = 3
repetitions = 3
periods = 12
seed = 9
init = "plus"
observables = ["X3", "F:X~1", "rx*bz@v"]
lambdas = [2, 3]
points = { kind = "trajectory", origin = [0.0, 0.0], direction = [0.0, 1.0], values = [0.0, 0.5, 1.0] }
"#;

fn is_config(r: Result<(), Error>) -> bool {
    matches!(r, Err(Error::Config(_)))
}

#[test]
fn config_round_trip_and_validation() {
    let cfg = config(BASE);
    cfg.validate().unwrap();
    assert_eq!(cfg.size, 3);
    assert_eq!(cfg.points.points().len(), 3);
    assert_eq!(cfg.points.points()[1].p, vec![0.0, 0.5]);
    assert_eq!(cfg.points.points()[1].coordinate, Some(0.5));
    let again = config(&toml::to_string(&cfg).unwrap());
    assert_eq!(again, cfg);

    assert!(ExperimentConfig::from_toml(&format!("{BASE}\nextra = 1")).is_err());
    for (from, to) in [
        ("periods = 12", "periods = 10"),
        ("L = 3", "L = 4"),
        ("direction = [0.0, 1.0]", "direction = [0.0, 1.5]"),
        ("origin = [0.0, 0.0], direction = [0.0, 1.0]", "origin = [0.0], direction = [1.0]"),
        ("repetitions = 3", "repetitions = 0"),
    ] {
        let bad = config(&BASE.replace(from, to));
        assert!(is_config(bad.validate()), "{to}");
        assert!(Experiment::new(bad).is_err());
    }
    assert!(ExperimentConfig::from_toml(&BASE.replace("\"X3\"", "\"X5\"")).is_err());
    assert!(is_config(config(&BASE.replace("[gy2?p2]", "[gy2?p2; bad")).validate()));
}

#[test]
fn observables_parse() {
    let x3: Observable = "X3".parse().unwrap();
    assert_eq!((x3.anyon, x3.direction), (Anyon::BX, Direction::H));
    let s: Observable = "rx*bz@v".parse().unwrap();
    assert_eq!(s.anyon, Anyon::RX * Anyon::BZ);
    assert!("F:Q~1".parse::<Observable>().is_err());
    assert!("X0".parse::<Observable>().is_err());
}

#[test]
fn seeds_reproduce_csv_bytes() {
    let run = |text: &str| {
        let exp = Experiment::new(config(text)).unwrap();
        let recs = exp.sweep().unwrap();
        let mut buf = Vec::new();
        exp.write_csv(&recs, &mut buf).unwrap();
        (buf, serde_json::to_string(&exp.summarize(&recs).unwrap()).unwrap())
    };
    let a = run(BASE);
    assert_eq!(a, run(BASE));
    assert_ne!(a.0, run(&BASE.replace("seed = 9", "seed = 10")).0);
    let text = String::from_utf8(a.0).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(header, "point,p1,p2,rep,seed,t,S,G:X3,G:F:X~1,G:rx*bz@v");
    assert_eq!(text.lines().count(), 1 + 3 * 3 * 13);
}

#[test]
fn task_seeds_are_distinct() {
    let mut seen = std::collections::HashSet::new();
    for point in 0..20 {
        for rep in 0..50 {
            assert!(seen.insert(task_seed(1, point, rep)));
        }
    }
    assert_ne!(task_seed(1, 0, 0), task_seed(2, 0, 0));
}

fn trajectory(seq: &str, l: usize, p: &[f64], init: InitialState, obs: &[&str], periods: usize, seed: u64) -> Trajectory {
    let sch = Schedule::new(&seq.parse().unwrap(), l).unwrap();
    let ops: Vec<_> = obs
        .iter()
        .map(|o| {
            let o: Observable = o.parse().unwrap();
            sch.lattice.logical_string(o.anyon, o.direction)
        })
        .collect();
    let st = StabilizerTableau::new(sch.lattice.num_qubits());
    run_trajectory(&sch, st, p, &init, &ops, periods, seed).unwrap()
}

#[test]
fn clean_example_keeps_four_logical_qubits() {
    for p in [0.0, 1.0] {
        let t = trajectory(EXAMPLE, 6, &[p], InitialState::Mixed, &[], 12, 1);
        assert!(t.entropy.iter().all(|&s| s == 4), "p={p}");
    }
}

#[test]
fn ex1_corner_sequences() {
    let cases: [([f64; 2], Vec<u8>); 4] = [
        ([0.0, 0.0], vec![1; 7]),
        ([1.0, 0.0], vec![1, 0, 1, 0, 1, 0, 1]),
        ([0.0, 1.0], vec![1, 0, 1, 0, 1, 0, 1]),
        ([1.0, 1.0], vec![1, 0, 0, 1, 0, 0, 1]),
    ];
    for (p, want) in cases {
        let t = trajectory(EX1, 6, &p, InitialState::Plus, &["X3"], 6, 4);
        assert_eq!(t.g[0], want, "{p:?}");
        assert!(t.entropy.iter().all(|&s| s == 0));
    }
}

/// Logical strings prepared at t = 0 reappear as their automorphism images
/// after one clean period.
#[test]
fn clean_periods_apply_the_corner_automorphism() {
    let model = DisorderModel::new(EX1.parse().unwrap()).unwrap();
    let table = model.corner_outcomes().unwrap();
    let bosons: Vec<Anyon> = Anyon::all().filter(|a| a.as_boson().is_some()).collect();
    for (bits, outcome) in [[0u8, 0], [1, 0], [0, 1], [1, 1]].map(|b| (b, table.get(&b).unwrap().clone())) {
        let phi = outcome.automorphism().unwrap();
        let sch = Schedule::new(&EX1.parse().unwrap(), 6).unwrap();
        let p: Vec<f64> = bits.iter().map(|&b| b as f64).collect();
        for &a in &bosons {
            for d in [Direction::V, Direction::H] {
                let obs = Observable { name: format!("{a}@{d}"), anyon: a, direction: d };
                let mut st = StabilizerTableau::new(sch.lattice.num_qubits());
                let (mut dis, mut out) = task_rngs(3);
                sch.initialize(&mut st, &InitialState::Custom(vec![obs]), &mut out).unwrap();
                sch.run_period(&mut st, &p, &mut dis, &mut out);
                let image = sch.lattice.logical_string(phi.apply(a), d);
                assert_eq!(st.expectation_squared(&image), 1, "{bits:?} {phi} {a}@{d}");
                for g in sch.lattice.cc_tilde_generators() {
                    assert!(matches!(st.contains(&g), Membership::InGroup(_)));
                }
            }
        }
    }
}

/// Runs one period on the mixed codestate keeping the links of parameter
/// `pi` whose cell lies outside `missing`, and the other parameters off.
fn period_with_region(
    seq: &str,
    l: usize,
    pi: usize,
    missing: impl Fn(usize, usize) -> bool,
) -> (Schedule, StabilizerTableau) {
    let sch = Schedule::new(&seq.parse().unwrap(), l).unwrap();
    let mut st = StabilizerTableau::new(sch.lattice.num_qubits());
    let (_, mut out) = task_rngs(3);
    sch.initialize(&mut st, &InitialState::Mixed, &mut out).unwrap();
    sch.run_period_with(
        &mut st,
        |s| match (s.tag, s.link) {
            (Some(i), Some(e)) => i == pi && !missing(e / 3 % l, e / 3 / l),
            _ => true,
        },
        &mut out,
    );
    (sch, st)
}

#[test]
fn wrapped_boundaries_measure_the_fermion_string() {
    for seq in [EXAMPLE, EX1] {
        let model = DisorderModel::new(seq.parse().unwrap()).unwrap();
        for (pi, name) in model.parameters().iter().enumerate() {
            let a = model.measured_anyon(name).unwrap();
            for l in [6usize, 9] {
                let half = l / 2;
                let (sch, st) = period_with_region(seq, l, pi, |_, j| j >= half);
                assert_eq!(st.entropy(), 3);
                assert_eq!(st.expectation_squared(&sch.lattice.logical_string(a, Direction::H)), 1);

                let (sch, st) = period_with_region(seq, l, pi, |i, _| i >= half);
                assert_eq!(st.entropy(), 3);
                let vh = sch.lattice.logical_string(a, Direction::V).mul(&sch.lattice.logical_string(a, Direction::H)).unwrap();
                assert_eq!(st.expectation_squared(&vh), 1);

                let (_, st) = period_with_region(seq, l, pi, |i, j| i < half && j < half);
                assert_eq!(st.entropy(), 4, "{name}: contractible hole");
                let (_, st) = period_with_region(seq, l, pi, |i, j| !(i < half && j < half));
                assert_eq!(st.entropy(), 4, "{name}: contractible island");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn entropy_never_increases(p1 in 0.0..1.0f64, p2 in 0.0..1.0f64, seed in any::<u64>(), which in 0usize..3) {
        let (seq, p) = match which {
            0 => (EXAMPLE, vec![p1]),
            1 => (EX1, vec![p1, p2]),
            _ => (RGB, vec![]),
        };
        let t = trajectory(seq, 3, &p, InitialState::Mixed, &[], 24, seed);
        prop_assert_eq!(t.entropy[0], 4);
        prop_assert!(t.entropy.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn observables_of_pure_states_stay_sharp(p in 0.0..1.0f64, seed in any::<u64>()) {
        // A logical string's expectation squared is 0 or 1, and the state
        // stays pure once all four logicals are fixed.
        let t = trajectory(EXAMPLE, 3, &[p], InitialState::Plus, &["X1", "Z2", "F:X~1"], 12, seed);
        prop_assert!(t.entropy.iter().all(|&s| s == 0));
        prop_assert!(t.g.iter().flatten().all(|&g| g <= 1));
    }
}

#[test]
fn backends_agree_through_the_schedule() {
    let sch = Schedule::new(&EX1.parse().unwrap(), 3).unwrap();
    let ops = [sch.lattice.logical_string(Anyon::BX, Direction::H)];
    for seed in 0..4 {
        let fast = run_trajectory(&sch, StabilizerTableau::new(36), &[0.3, 0.6], &InitialState::Plus, &ops, 10, seed).unwrap();
        let slow = run_trajectory(&sch, common::naive::NaiveTableau::new(36), &[0.3, 0.6], &InitialState::Plus, &ops, 10, seed).unwrap();
        assert_eq!(fast, slow);
    }
}

#[test]
fn summaries_report_fourier_components() {
    let cfg = config(&BASE.replace("values = [0.0, 0.5, 1.0]", "values = [1.0]").replace("L = 3", "L = 6"));
    let exp = Experiment::new(cfg).unwrap();
    let recs = exp.sweep().unwrap();
    let sum = exp.summarize(&recs).unwrap();
    let pt = &sum.points[0];
    assert_eq!(pt.mean_entropy, vec![0.0; 13]);
    assert_eq!(pt.min_entropy, 0);
    assert!((pt.fourier["X3"][&2] - 1.0).abs() < 1e-12);
    assert!(pt.fourier["X3"][&3].abs() < 1e-12);
    assert_eq!(pt.fourier_err["X3"][&2], 0.0);
    let json = serde_json::to_value(&sum).unwrap();
    assert_eq!(json["points"][0]["p"], serde_json::json!([0.0, 1.0]));
}
