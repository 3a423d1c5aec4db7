mod common;

use common::fixtures::*;
use dacode::anyon::FermionGroup;
use dacode::automorphism::{transition_map, Automorphism, ClassId, Parity};
use dacode::fet_graph::{
    adjacency_witness, classify_m_component, logically_connected, protected_algebra, FetGraph, Protection,
};
use dacode::logical::{strings_anticommute, Direction};

#[test]
fn two_components_split_by_parity() {
    let g = FetGraph::build();
    let comps = g.components();
    assert_eq!(comps.len(), 2);
    for c in comps {
        assert_eq!(c.len(), 36);
        let p = c[0].s3s3_parity();
        assert!(c.iter().all(|a| a.s3s3_parity() == p));
    }
}

#[test]
fn distance_from_identity_by_class() {
    let g = FetGraph::build();
    let expected = [
        (ClassId::Reflection, 1),
        (ClassId::DoubleRotation, 2),
        (ClassId::DoubleTransposition, 2),
        (ClassId::SixCycle, 3),
        (ClassId::Rotation, 4),
    ];
    for phi in Automorphism::all() {
        let d = g.distance(Automorphism::IDENTITY, phi);
        match expected.iter().find(|(c, _)| *c == phi.class()) {
            Some((_, k)) => assert_eq!(d, Some(*k), "{phi}"),
            None if phi == Automorphism::IDENTITY => assert_eq!(d, Some(0)),
            None => assert_eq!(d, None, "{phi}"),
        }
    }
}

#[test]
fn distance_is_translation_invariant() {
    let g = FetGraph::build();
    for &a in g.nodes() {
        for &b in g.nodes() {
            assert_eq!(g.distance(a, b), g.distance(Automorphism::IDENTITY, transition_map(a, b)));
            assert_eq!(g.distance(a, b), g.distance(b, a));
        }
    }
}

#[test]
fn witnesses_realize_every_adjacent_pair() {
    let g = FetGraph::build();
    for &a in g.nodes() {
        for &b in g.nodes() {
            if !g.adjacent(a, b) {
                assert!(adjacency_witness(a, b).is_err());
                continue;
            }
            let dm = adjacency_witness(a, b).unwrap();
            assert_eq!(dm.parameters().len(), 1);
            assert_eq!(dm.corner_outcome(&[0]).unwrap().automorphism(), Some(a), "{a} -> {b}");
            assert_eq!(dm.corner_outcome(&[1]).unwrap().automorphism(), Some(b), "{a} -> {b}");
        }
    }
}

#[test]
fn protected_tables_match_transcription() {
    let f = protected_algebra(FermionGroup::F);
    let expected_f = [("rx*bz", "v", "X1Z4"), ("rz*by", "h", "Z1Z2X3"), ("rx*bz", "h", "Z1X4"), ("rz*by", "v", "X2Z3Z4")];
    let fp = protected_algebra(FermionGroup::FPrime);
    let expected_fp = [("rz*bx", "v", "X2Z3"), ("rx*by", "h", "Z1X3X4"), ("rz*bx", "h", "Z2X3"), ("rx*by", "v", "X1X2Z4")];
    for (table, expected) in [(f, expected_f), (fp, expected_fp)] {
        for (op, (anyon, dir, eq)) in table.iter().zip(expected) {
            assert_eq!(op.anyon, anyon.parse().unwrap());
            assert_eq!(op.direction, dir.parse::<Direction>().unwrap());
            assert_eq!(op.equivalent, eq);
        }
        let s = |i: usize| (table[i].anyon, table[i].direction);
        assert!(strings_anticommute(s(0), s(1)));
        assert!(strings_anticommute(s(2), s(3)));
        assert!(!strings_anticommute(s(0), s(3)));
        assert!(!strings_anticommute(s(1), s(2)));
    }
}

#[test]
fn protected_operators_commute_with_localized_fermions() {
    for a in Automorphism::all() {
        for b in Automorphism::all() {
            let Some(cert) = logically_connected(a, b) else { continue };
            let tau = transition_map(a, b);
            for op in protected_algebra(cert.table) {
                assert_eq!(tau.apply(op.anyon), op.anyon, "{tau} moves {}", op.anyon);
                for c in tau.localized_anyons() {
                    assert!(!op.anyon.is_semion_with(c));
                }
            }
        }
    }
}

#[test]
fn logical_connectivity_rule() {
    let g = FetGraph::build();
    let mut count = 0;
    for a in Automorphism::all() {
        for b in Automorphism::all() {
            let c = logically_connected(a, b);
            assert_eq!(c.is_some(), logically_connected(b, a).is_some());
            if c.is_some() {
                count += 1;
                assert_eq!(a.s3s3_parity(), Parity::Even);
                assert!(g.distance(a, b).unwrap() <= 2);
            }
        }
    }
    // 36 even nodes, each with 6 reflections and 4 double rotations.
    assert_eq!(count, 36 * 10);
}

#[test]
fn m_component_classification() {
    assert_eq!(classify_m_component(&model(EX1)).unwrap().verdict, Protection::FullyProtected);
    assert_eq!(classify_m_component(&model(DIFFPARITY)).unwrap().verdict, Protection::IrreversibleRisk);
    assert_eq!(classify_m_component(&model(B_EXAMPLE_2)).unwrap().verdict, Protection::CriticalLoss);
    assert_eq!(classify_m_component(&model(B_EXAMPLE_3)).unwrap().verdict, Protection::IrreversibleRisk);
    assert_eq!(classify_m_component(&model(B_EXAMPLE_4)).unwrap().verdict, Protection::CriticalLoss);
    assert_eq!(classify_m_component(&model(EXAMPLE)).unwrap().verdict, Protection::FullyProtected);
}

#[test]
fn exports() {
    let g = FetGraph::build();
    let mut buf = Vec::new();
    g.write_distance_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 73);
    assert!(text.lines().nth(1).unwrap().starts_with("id,C{id},0,1,"));
    let dot = g.to_dot();
    assert_eq!(dot.matches(" -- ").count(), g.edge_count());
    assert_eq!(g.edge_count(), 72 * 6 / 2);
}
