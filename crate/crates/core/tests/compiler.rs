mod common;

use std::collections::HashSet;

use common::fixtures::*;
use dacode::anyon::Anyon;
use dacode::automorphism::{transition_map, Automorphism, ClassId};
use dacode::condensation::{
    concatenate, enumerate_one_component_pairs, synthesize_sequence, Boundary, CornerOutcome,
    Theory, Verdict,
};
use dacode::error::Error;

#[test]
fn contribution_table_matches_transcription() {
    let mut seen = HashSet::new();
    for (iso, theories) in CONTRIBUTIONS {
        for t in theories {
            let theory: Theory = t.parse().unwrap();
            assert_eq!(theory.contribution(), Some(aut(iso)), "{t}");
            seen.insert(theory);
        }
    }
    let all: HashSet<Theory> = Theory::boundary_theories().into_iter().collect();
    assert_eq!(seen, all);
}

#[test]
fn named_sequences_compile() {
    assert_eq!(seq(RGB).compute_automorphism().unwrap(), aut("(rgb)"));
    assert_eq!(seq(WORKED).compute_automorphism().unwrap(), aut("(rz)(gy)(bx)"));
    assert_eq!(seq(EXAMPLE_P0).compute_automorphism().unwrap(), aut("(rxgybz)"));
    assert_eq!(seq(EXAMPLE_P1).compute_automorphism().unwrap(), aut("(rgb)"));
    assert_eq!(seq(ID1).compute_automorphism().unwrap(), Automorphism::IDENTITY);
    assert_eq!(seq(ID2).compute_automorphism().unwrap(), Automorphism::IDENTITY);
}

#[test]
fn example_corners_match_branches() {
    let dm = model(EXAMPLE);
    assert_eq!(dm.corner_sequence(&[0]).unwrap(), seq(EXAMPLE_P0));
    assert_eq!(dm.corner_sequence(&[1]).unwrap(), seq(EXAMPLE_P1));
    let t = dm.corner_outcomes().unwrap();
    assert_eq!(t.get(&[0]).unwrap().automorphism(), Some(aut("(rxgybz)")));
    assert_eq!(t.get(&[1]).unwrap().automorphism(), Some(aut("(rgb)")));
}

#[test]
fn red_orange_branch_is_intralayer_irreversible() {
    let out = model(RED_ORANGE).corner_outcome(&[0]).unwrap();
    match out {
        CornerOutcome::Irreversible(Verdict::Intralayer { layer, from, to, .. }) => {
            assert_eq!((layer, from.as_str(), to.as_str()), (1, "rx", "gx"));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn trivial_adjacent_models() {
    for (phi, text) in TRIVIAL_ADJACENT {
        let dm = model(text);
        assert_eq!(dm.corner_outcome(&[0]).unwrap().automorphism(), Some(Automorphism::IDENTITY), "{text}");
        assert_eq!(dm.corner_outcome(&[1]).unwrap().automorphism(), Some(aut(phi)), "{text}");
        for b in [0, 1] {
            assert!(dm.corner_sequence(&[b]).unwrap().check_reversible().is_ok());
        }
    }
}

#[test]
fn two_component_corner_tables() {
    for (name, text, rows) in corner_fixtures() {
        let table = model(text).corner_outcomes().unwrap();
        for (p1, p2, expected) in rows {
            let out = table.get(&[p1, p2]).unwrap();
            if expected == "IrrP" {
                assert!(out.automorphism().is_none(), "{name} ({p1},{p2}): {out:?}");
            } else {
                assert_eq!(out.automorphism(), Some(aut(expected)), "{name} ({p1},{p2})");
            }
        }
    }
}

#[test]
fn diffparity_irreversible_corners_are_interlayer() {
    let table = model(DIFFPARITY).corner_outcomes().unwrap();
    for bits in [[1, 0], [0, 1]] {
        assert_eq!(table.get(&bits).unwrap().label(), "IrrP(interlayer)");
    }
    let json = table.to_json();
    assert_eq!(json["00"], "(rz)(gx)(by)");
    assert_eq!(json["10"], "IrrP(interlayer)");
}

#[test]
fn synthesis_round_trips_for_all_automorphisms() {
    for phi in Automorphism::all() {
        let s = synthesize_sequence(phi, None).unwrap();
        assert!(s.check_reversible().is_ok());
        assert_eq!(s.compute_automorphism().unwrap(), phi);
        assert!(s.tc_stages().len() <= 4, "{phi}: {} stages", s.tc_stages().len());
    }
}

/// Automorphisms the compiler formula allows once one boundary contribution
/// is fixed and the other ranges over all boundary theories.
fn formula_reachable(fixed: Automorphism, fixed_is_first: bool) -> HashSet<Automorphism> {
    let s = aut("(rx)(gy)(bz)");
    let s2 = aut("(rz)(gy)(bx)");
    let mids = [Automorphism::IDENTITY, s, s2, s.compose(s2)];
    let mut out = HashSet::new();
    for t in Theory::boundary_theories() {
        let other = t.contribution().unwrap();
        let (phi_i, phi_f) = if fixed_is_first { (fixed, other) } else { (other, fixed) };
        for m in mids {
            out.insert(phi_f.compose(m).compose(phi_i.inverse()));
        }
    }
    out
}

#[test]
fn synthesis_honors_boundaries_where_reachable() {
    let mut longest = 0;
    for t in Theory::boundary_theories() {
        let c = t.contribution().unwrap();
        for (is_first, reach) in [(true, formula_reachable(c, true)), (false, formula_reachable(c, false))] {
            assert_eq!(reach.len(), 48);
            for phi in Automorphism::all() {
                let b = if is_first { Boundary::First(t) } else { Boundary::Last(t) };
                match synthesize_sequence(phi, Some(b)) {
                    Ok(s) => {
                        assert!(reach.contains(&phi), "{phi} {t}");
                        let end = if is_first { s.first_theory() } else { s.final_theory() };
                        assert_eq!(end, Some(t));
                        assert_eq!(s.compute_automorphism().unwrap(), phi);
                        longest = longest.max(s.tc_stages().len());
                    }
                    Err(Error::SynthesisFailed(_)) => assert!(!reach.contains(&phi), "{phi} {t}"),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
    assert!(longest <= 4, "{longest} stages");
}

#[test]
fn synthesis_reproduces_named_witnesses() {
    assert_eq!(synthesize_sequence(Automorphism::IDENTITY, None).unwrap(), seq(ID2));
    let w = synthesize_sequence(aut("(ry)(gx)(bz)"), None).unwrap();
    assert_eq!(w, model(TRIVIAL_ADJACENT[0].1).corner_sequence(&[1]).unwrap());
}

#[test]
fn concatenation_is_a_homomorphism() {
    let all = Automorphism::all();
    for (i, &a) in all.iter().enumerate() {
        let sa = synthesize_sequence(a, None).unwrap();
        let end = sa.final_theory().unwrap();
        for &c in all.iter().skip(i % 7).step_by(7) {
            let Ok(sc) = synthesize_sequence(c, Some(Boundary::First(end))) else {
                continue;
            };
            let joined = concatenate(&sa, &sc).unwrap();
            assert!(joined.check_reversible().is_ok());
            assert_eq!(joined.compute_automorphism().unwrap(), c.compose(a));
        }
    }
    let rgb = seq(RGB);
    let id = synthesize_sequence(Automorphism::IDENTITY, Some(Boundary::First(rgb.final_theory().unwrap()))).unwrap();
    assert_eq!(concatenate(&rgb, &id).unwrap().compute_automorphism().unwrap(), aut("(rgb)"));
}

#[test]
fn concatenation_keeps_tagged_boundary_stage() {
    let a = seq(ID2);
    let c = seq("CC; [rx1?p,bx2]; [gy1]; [rx1]; CC");
    let joined = concatenate(&a, &c).unwrap();
    assert_eq!(joined.tc_stages().len(), 4);
    assert!(matches!(concatenate(&seq(RGB), &seq(ID2)), Err(Error::BoundaryMismatch(_))));
}

#[test]
fn measured_anyon_routes_agree() {
    assert_eq!(model(EXAMPLE).measured_anyon("p").unwrap(), "ry*bz".parse::<Anyon>().unwrap());
    assert_eq!(
        model(TRIVIAL_ADJACENT[0].1).measured_anyon("p").unwrap(),
        "ry*gx*bz".parse::<Anyon>().unwrap()
    );
    let mut models: Vec<&str> = TRIVIAL_ADJACENT.iter().map(|(_, m)| *m).collect();
    models.push(EXAMPLE);
    for text in models {
        let dm = model(text);
        let tau = dm.parameter_transition("p").unwrap();
        let localized = tau.localized_anyons();
        let measured = dm.measured_anyon("p").unwrap();
        assert_eq!(localized.len(), 2, "{text}");
        assert!(localized.contains(&measured) && !measured.is_vacuum(), "{text}: {measured}");
    }
}

#[test]
fn measured_anyon_of_trivial_disorder_is_vacuum() {
    let dm = model("CC; [rx1,bx2]; [gy1?p]; [rx1]; CC");
    assert_eq!(dm.parameter_transition("p").unwrap(), Automorphism::IDENTITY);
    assert_eq!(dm.measured_anyon("p").unwrap(), Anyon::VACUUM);
}

#[test]
fn measured_anyon_rejects_irreversible_branch() {
    assert!(matches!(model(RED_ORANGE).measured_anyon("p"), Err(Error::Irreversible(_))));
}

#[test]
fn one_component_models_satisfy_separation() {
    let pairs = enumerate_one_component_pairs();
    let mut taus = HashSet::new();
    for (a, b) in &pairs {
        let tau = transition_map(*a, *b);
        if tau != Automorphism::IDENTITY {
            assert_eq!(tau.class(), ClassId::Reflection, "{a} -> {b}");
            taus.insert(tau);
        }
    }
    assert_eq!(taus.len(), 6);
    let realized: HashSet<(Automorphism, Automorphism)> =
        pairs.into_iter().filter(|(a, b)| a != b).collect();
    for a in Automorphism::all() {
        for b in Automorphism::all() {
            let separated = transition_map(a, b).class() == ClassId::Reflection;
            assert_eq!(realized.contains(&(a, b)), separated, "{a} -> {b}");
        }
    }
}
