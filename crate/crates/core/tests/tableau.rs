mod common;

use common::naive::NaiveTableau;
use dacode::anyon::{Anyon, Phase};
use dacode::condensation::Layer;
use dacode::lattice::HoneycombTorus;
use dacode::logical::{Direction, LogicalFactor, LogicalKind};
use dacode::pauli::{Pauli, PauliOperator};
use dacode::tableau::{Membership, StabilizerBackend, StabilizerTableau};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliOperator> {
    (prop::collection::vec(0u8..4, n), any::<bool>()).prop_map(move |(letters, minus)| {
        let mut op = PauliOperator::identity(n);
        for (q, l) in letters.into_iter().enumerate() {
            op.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][l as usize]);
        }
        if minus {
            op.negated()
        } else {
            op
        }
    })
}

fn sparse_strategy(n: usize) -> impl Strategy<Value = PauliOperator> {
    (0..n, 0..n, 1u8..4, 1u8..4).prop_map(move |(a, b, pa, pb)| {
        let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let mut op = PauliOperator::identity(n);
        op.set(a, letters[pa as usize]);
        op.set(b, letters[pb as usize]);
        op
    })
}

fn check_against_oracle(n: usize, ops: &[PauliOperator], queries: &[PauliOperator], seed: u64) {
    for margin in [None, Some(0), Some(32)] {
        check_with_margin(n, ops, queries, seed, margin);
    }
}

fn check_with_margin(n: usize, ops: &[PauliOperator], queries: &[PauliOperator], seed: u64, margin: Option<u32>) {
    let mut fast = StabilizerTableau::new(n);
    fast.set_relocalize(margin);
    let mut slow = NaiveTableau::new(n);
    let mut r1 = ChaCha8Rng::seed_from_u64(seed);
    let mut r2 = ChaCha8Rng::seed_from_u64(seed);
    for op in ops {
        let a = fast.measure(op, &mut r1);
        let b = slow.measure(op, &mut r2);
        assert_eq!(a, b, "{op}");
        assert_eq!(fast.rank(), slow.rank());
        for s in fast.stabilizers() {
            assert_eq!(slow.contains(&s), Membership::InGroup(Phase::Plus), "{s}");
        }
        for q in queries {
            assert_eq!(fast.contains(q), slow.contains(q), "{q}");
            assert_eq!(fast.expectation_squared(q), slow.expectation_squared(q));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn agrees_with_oracle_dense(
        ops in prop::collection::vec(pauli_strategy(5), 1..30),
        queries in prop::collection::vec(pauli_strategy(5), 4),
        seed in any::<u64>(),
    ) {
        check_against_oracle(5, &ops, &queries, seed);
    }

    #[test]
    fn agrees_with_oracle_sparse(
        ops in prop::collection::vec(sparse_strategy(70), 1..200),
        queries in prop::collection::vec(sparse_strategy(70), 4),
        seed in any::<u64>(),
    ) {
        check_against_oracle(70, &ops, &queries, seed);
    }

    #[test]
    fn untracked_measurements_keep_signs(
        ops in prop::collection::vec(sparse_strategy(40), 1..150),
        seed in any::<u64>(),
    ) {
        let mut fast = StabilizerTableau::new(40);
        let mut slow = NaiveTableau::new(40);
        let mut r1 = ChaCha8Rng::seed_from_u64(seed);
        let mut r2 = ChaCha8Rng::seed_from_u64(seed);
        fast.set_relocalize(Some(0));
        for op in &ops {
            let a = fast.measure_untracked(op, &mut r1);
            let b = slow.measure(op, &mut r2);
            prop_assert_eq!(a.is_random(), b.is_random());
            if a.is_random() {
                prop_assert_eq!(a, b);
            }
        }
        for s in fast.stabilizers() {
            prop_assert_eq!(slow.contains(&s), Membership::InGroup(Phase::Plus));
        }
    }

    #[test]
    fn rank_never_decreases(ops in prop::collection::vec(pauli_strategy(6), 1..40), seed in any::<u64>()) {
        let mut t = StabilizerTableau::new(6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rank = 0;
        for op in &ops {
            let before = t.entropy();
            let out = t.measure_untracked(op, &mut rng);
            prop_assert!(t.rank() >= rank);
            if t.entropy() < before {
                prop_assert!(out.is_random());
                prop_assert_eq!(t.entropy() + 1, before);
            }
            rank = t.rank();
            let stabs = t.stabilizers();
            for a in &stabs {
                for b in &stabs {
                    prop_assert!(a.commutes(b));
                }
            }
        }
    }

    #[test]
    fn same_seed_same_outcomes(ops in prop::collection::vec(pauli_strategy(6), 1..30), seed in any::<u64>()) {
        let run = || {
            let mut t = StabilizerTableau::new(6);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            ops.iter().map(|op| t.measure(op, &mut rng)).collect::<Vec<_>>()
        };
        prop_assert_eq!(run(), run());
    }
}

#[test]
fn fresh_tableau_is_maximally_mixed() {
    let t = StabilizerTableau::new(16);
    assert_eq!(t.entropy(), 16);
    assert_eq!(t.logical_pairs().len(), 16);
}

fn condensed_state(lat: &HoneycombTorus, rng: &mut ChaCha8Rng) -> StabilizerTableau {
    let mut t = StabilizerTableau::new(lat.num_qubits());
    for op in lat.plaquette_operators().iter().chain(&lat.interlayer_links()) {
        t.measure(op, rng);
    }
    t
}

#[test]
fn condensed_code_keeps_four_qubits() {
    let lat = HoneycombTorus::new(3).unwrap();
    assert_eq!(lat.num_qubits(), 36);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut t = condensed_state(&lat, &mut rng);
    assert_eq!(t.entropy(), 4);
    for g in lat.cc_tilde_generators() {
        assert!(matches!(t.contains(&g), Membership::InGroup(_)));
    }
    for p in 0..lat.num_plaquettes() {
        let pz2 = lat.plaquette_operator(p, Layer::Two, Pauli::Z);
        assert!(matches!(t.contains(&pz2), Membership::InGroup(_)));
    }
    for f in LogicalFactor::all() {
        assert_eq!(t.contains(&lat.logical_operator(f)), Membership::CommutesNotInSpan, "{f}");
    }
    for q in 1..=4 {
        let x = lat.logical_operator(LogicalFactor::new(LogicalKind::X, q));
        assert!(t.measure(&x, &mut rng).is_random());
    }
    assert_eq!(t.entropy(), 0);
}

#[test]
fn postselected_logical_state() {
    let lat = HoneycombTorus::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut t = condensed_state(&lat, &mut rng);
    for q in 1..=4 {
        let x = lat.logical_operator(LogicalFactor::new(LogicalKind::X, q));
        t.measure_postselect(&x, Phase::Plus).unwrap();
    }
    for q in 1..=4 {
        let x = lat.logical_operator(LogicalFactor::new(LogicalKind::X, q));
        assert_eq!(t.contains(&x), Membership::InGroup(Phase::Plus));
        assert_eq!(t.expectation_squared(&x), 1);
        let z = lat.logical_operator(LogicalFactor::new(LogicalKind::Z, q));
        assert_eq!(t.contains(&z), Membership::Anticommutes);
        assert!(t.measure_postselect(&x.negated(), Phase::Plus).is_err());
    }
    // Strings of bosons deformed by stabilizers keep their values.
    let gx = lat.logical_string(Anyon::GX, Direction::V);
    assert_eq!(t.expectation_squared(&gx), 1);
}

#[test]
fn condensed_init_matches_oracle() {
    let lat = HoneycombTorus::new(3).unwrap();
    let mut fast = StabilizerTableau::new(lat.num_qubits());
    let mut slow = NaiveTableau::new(lat.num_qubits());
    let mut r1 = ChaCha8Rng::seed_from_u64(11);
    let mut r2 = ChaCha8Rng::seed_from_u64(11);
    for op in lat.plaquette_operators().iter().chain(&lat.interlayer_links()) {
        assert_eq!(fast.measure(op, &mut r1), slow.measure(op, &mut r2));
    }
    assert_eq!(slow.entropy(), 4);
    assert_eq!(fast.entropy(), 4);
}

#[test]
fn translated_logicals_are_equivalent() {
    let lat = HoneycombTorus::new(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t = condensed_state(&lat, &mut rng);
    for a in [Anyon::RX, Anyon::RZ, Anyon::BX, Anyon::BZ, Anyon::GY] {
        for d in [Direction::V, Direction::H] {
            let op = lat.logical_string(a, d);
            for (di, dj) in [(-2, 1), (1, 1), (3, 0), (0, 3)] {
                let moved = lat.translate(&op, di, dj).unwrap();
                let product = moved.mul(&op).unwrap();
                assert!(matches!(t.contains(&product), Membership::InGroup(_)), "{a}_{d} by ({di},{dj})");
            }
        }
    }
    assert!(lat.translate(&lat.logical_string(Anyon::RX, Direction::V), 1, 0).is_err());
}
