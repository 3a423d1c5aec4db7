//! Measurement-sequence fixtures shared by the integration tests.

#![allow(dead_code)]

use dacode::automorphism::Automorphism;
use dacode::condensation::{DisorderModel, MeasurementSequence};

pub const RGB: &str = "CC; [rx1,bx2]; [bz1,gz2]; [gy1,ry2]; CC";
pub const WORKED: &str = "CC; [rx1,gx2]; [gy1]; [rx1,by2]; CC";
pub const EXAMPLE: &str = "CC; [rx1,bx2]; [gz2]; [bz1?p]; [gy1,ry2]; CC";
pub const EXAMPLE_P0: &str = "CC; [rx1,bx2]; [gz2]; [gy1,ry2]; CC";
pub const EXAMPLE_P1: &str = "CC; [rx1,bx2]; [gz2]; [bz1]; [gy1,ry2]; CC";
pub const RED_ORANGE: &str = "CC; [rx1,bx2]; [gz2]; [bz1?p]; [gx1,ry2]; CC";
pub const EX1: &str = "CC; [rx1,bx2]; [gz1,gy2]; [by1?p1]; [rx1,bx2]; [gy2?p2]; CC";
pub const DIFFPARITY: &str = "CC; [rx1,bx2]; [gy2]; [gy1?p1]; [rx2?p2]; CC";
pub const B_EXAMPLE_2: &str = "CC; [rx1,bx2]; [gy1,gz2]; [rz1?p1]; [bx2?p2]; [bx1,ry2]; CC";
pub const B_EXAMPLE_3: &str = "CC; [rx1,bx2]; [by1,gy2]; [gx1?p1]; [rx2?p2]; CC";
pub const B_EXAMPLE_4: &str = "CC; [rx1,bx2]; [by1,ry2]; [rz1?p1]; [gz2?p2]; [gx1,bx2]; CC";
pub const ID1: &str = "CC; [rx1,bx2]; [gy1,gz2]; [bx1,rx2]; [gz1,gy2]; [rx1,bx2]; CC";
pub const ID2: &str = "CC; [rx1,bx2]; CC";

/// Trivial-adjacent 1-component models: (automorphism at p=1, model).
pub const TRIVIAL_ADJACENT: [(&str, &str); 6] = [
    ("(ry)(gx)(bz)", "CC; [rx1,bx2]; [gy1?p]; CC"),
    ("(rz)(gx)(by)", "CC; [rx1,bx2]; [gy2?p]; CC"),
    ("(ry)(gz)(bx)", "CC; [rx1,gx2]; [by1?p]; CC"),
    ("(rx)(gz)(by)", "CC; [gx1,bx2]; [ry2?p]; CC"),
    ("(rx)(gy)(bz)", "CC; [rx1,bx2]; [gy1?p]; [bz1]; [rx1]; CC"),
    ("(rz)(gy)(bx)", "CC; [rx1,bx2]; [gy2?p]; [rz2]; [bx2]; CC"),
];

/// Corner tables as (p1, p2, outcome) rows; "IrrP" marks an irreversible
/// corner.
pub const EX1_CORNERS: [(u8, u8, &str); 4] = [
    (0, 0, "id"),
    (1, 0, "(rx)(gy)(bz)"),
    (0, 1, "(rz)(gx)(by)"),
    (1, 1, "(rgb)(xzy)"),
];
pub const DIFFPARITY_CORNERS: [(u8, u8, &str); 4] = [
    (0, 0, "(rz)(gx)(by)"),
    (1, 0, "IrrP"),
    (0, 1, "IrrP"),
    (1, 1, "(rybz)(gx)"),
];
pub const B_EXAMPLE_2_CORNERS: [(u8, u8, &str); 4] = [
    (0, 0, "(rb)(xy)"),
    (1, 0, "(rygxbz)"),
    (0, 1, "(rzbygx)"),
    (1, 1, "(xzy)"),
];
pub const B_EXAMPLE_3_CORNERS: [(u8, u8, &str); 4] = [
    (0, 0, "(rg)(xz)"),
    (1, 0, "IrrP"),
    (0, 1, "(rygxbz)"),
    (1, 1, "(rgb)"),
];
pub const B_EXAMPLE_4_CORNERS: [(u8, u8, &str); 4] = [
    (0, 0, "(rg)"),
    (1, 0, "(rxgy)(bz)"),
    (0, 1, "(rzgy)(bx)"),
    (1, 1, "(rbg)(xz)"),
];

/// All 2-component corner-table fixtures.
pub type CornerRows = [(u8, u8, &'static str); 4];

pub fn corner_fixtures() -> Vec<(&'static str, &'static str, CornerRows)> {
    vec![
        ("ex1", EX1, EX1_CORNERS),
        ("diffparity", DIFFPARITY, DIFFPARITY_CORNERS),
        ("example 2", B_EXAMPLE_2, B_EXAMPLE_2_CORNERS),
        ("example 3", B_EXAMPLE_3, B_EXAMPLE_3_CORNERS),
        ("example 4", B_EXAMPLE_4, B_EXAMPLE_4_CORNERS),
    ]
}

/// Isomorphism contribution of every boundary theory, transcribed row by
/// row: (isomorphism, [theory, theory]).
pub const CONTRIBUTIONS: [(&str, [&str; 2]); 12] = [
    ("id", ["[rx1,bx2]", "[ry1,by2]"]),
    ("(xy)", ["[rx1,by2]", "[ry1,bx2]"]),
    ("(rg)", ["[gx1,bx2]", "[gy1,by2]"]),
    ("(rg)(xy)", ["[gx1,by2]", "[gy1,bx2]"]),
    ("(gb)", ["[rx1,gx2]", "[ry1,gy2]"]),
    ("(gb)(xy)", ["[rx1,gy2]", "[ry1,gx2]"]),
    ("(rb)", ["[bx1,rx2]", "[by1,ry2]"]),
    ("(rb)(xy)", ["[bx1,ry2]", "[by1,rx2]"]),
    ("(rgb)", ["[gx1,rx2]", "[gy1,ry2]"]),
    ("(rgb)(xy)", ["[gx1,ry2]", "[gy1,rx2]"]),
    ("(rbg)", ["[bx1,gx2]", "[by1,gy2]"]),
    ("(rbg)(xy)", ["[bx1,gy2]", "[by1,gx2]"]),
];

pub fn seq(s: &str) -> MeasurementSequence {
    s.parse().expect("fixture parses")
}

pub fn model(s: &str) -> DisorderModel {
    DisorderModel::new(seq(s)).expect("fixture has a parameter")
}

pub fn aut(s: &str) -> Automorphism {
    s.parse().expect("fixture automorphism parses")
}
