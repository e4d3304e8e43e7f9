//! Dimension bounds for compact 8-dimensional planes and the unital summaries,
//! as a static queryable table.
//!
//! Bounds read: `dim >= b` the plane is known, `b'` a translation plane,
//! `b''` a Cartesian plane, `b*` a Hughes plane, `c` classical; `d` is an
//! upper bound on the group dimension and `dim >= g` determines the group.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixedConfiguration {
    Empty,
    W,
    Flag,
    OW,
    Uv,
    Uvw,
    DoubleFlag,
    Triangle,
    Arbitrary,
}

impl FixedConfiguration {
    pub const ALL: [FixedConfiguration; 9] = [
        FixedConfiguration::Empty,
        FixedConfiguration::W,
        FixedConfiguration::Flag,
        FixedConfiguration::OW,
        FixedConfiguration::Uv,
        FixedConfiguration::Uvw,
        FixedConfiguration::DoubleFlag,
        FixedConfiguration::Triangle,
        FixedConfiguration::Arbitrary,
    ];

    pub fn id(self) -> &'static str {
        match self {
            FixedConfiguration::Empty => "empty",
            FixedConfiguration::W => "W",
            FixedConfiguration::Flag => "flag",
            FixedConfiguration::OW => "oW",
            FixedConfiguration::Uv => "uv",
            FixedConfiguration::Uvw => "uvw",
            FixedConfiguration::DoubleFlag => "double-flag",
            FixedConfiguration::Triangle => "triangle",
            FixedConfiguration::Arbitrary => "arbitrary",
        }
    }

    /// The usual notation for the fixed elements.
    pub fn symbol(self) -> &'static str {
        match self {
            FixedConfiguration::Empty => "∅",
            FixedConfiguration::W => "{W}",
            FixedConfiguration::Flag => "flag",
            FixedConfiguration::OW => "{o,W}",
            FixedConfiguration::Uv => "⟨u,v⟩",
            FixedConfiguration::Uvw => "⟨u,v,w⟩",
            FixedConfiguration::DoubleFlag => "⟨u,v,ov⟩",
            FixedConfiguration::Triangle => "⟨o,u,v⟩",
            FixedConfiguration::Arbitrary => "arbitrary",
        }
    }
}

impl FromStr for FixedConfiguration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let found = FixedConfiguration::ALL.into_iter().find(|f| {
            let alias = match f {
                FixedConfiguration::Empty => "∅",
                FixedConfiguration::OW => "{o,W}",
                FixedConfiguration::W => "{W}",
                _ => f.id(),
            };
            s == f.id() || s == alias || s == f.symbol()
        });
        found.ok_or_else(|| Error::Parse(format!("unknown fixed configuration {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupClass {
    Semisimple,
    NormalTorus,
    NormalVector,
    Arbitrary,
}

impl GroupClass {
    pub const ALL: [GroupClass; 4] = [GroupClass::Semisimple, GroupClass::NormalTorus, GroupClass::NormalVector, GroupClass::Arbitrary];

    pub fn id(self) -> &'static str {
        match self {
            GroupClass::Semisimple => "semisimple",
            GroupClass::NormalTorus => "normal-torus",
            GroupClass::NormalVector => "normal-vector",
            GroupClass::Arbitrary => "arbitrary",
        }
    }
}

impl FromStr for GroupClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupClass::ALL
            .into_iter()
            .find(|g| g.id() == s)
            .ok_or_else(|| Error::Parse(format!("unknown group class {s:?}")))
    }
}

/// Absent cells stay `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub b: Option<u32>,
    pub b_prime: Option<u32>,
    pub b_double_prime: Option<u32>,
    pub b_star: Option<u32>,
    pub c: Option<u32>,
    pub d: Option<u32>,
    pub g: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactRow {
    pub fixed_configuration: FixedConfiguration,
    pub group_class: GroupClass,
    pub bounds: Bounds,
    pub footnotes: Vec<u8>,
    pub citation: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Footnote {
    pub id: u8,
    pub statement: &'static str,
    pub source: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitalSummary {
    pub plane_dimension: u8,
    pub planes: &'static str,
    pub classes: u8,
    pub unitals: &'static str,
    pub motion_dimensions: &'static str,
}

const fn cell(b: [i32; 7]) -> Bounds {
    const fn opt(v: i32) -> Option<u32> {
        if v < 0 {
            None
        } else {
            Some(v as u32)
        }
    }
    Bounds { b: opt(b[0]), b_prime: opt(b[1]), b_double_prime: opt(b[2]), b_star: opt(b[3]), c: opt(b[4]), d: opt(b[5]), g: opt(b[6]) }
}

const N: i32 = -1;

/// Cells per fixed configuration in the order semisimple, normal torus,
/// normal vector group, arbitrary; bounds are `[b, b', b'', b*, c, d, g]`.
#[rustfmt::skip]
const TABLE: [(FixedConfiguration, [([i32; 7], u8); 4], &str); 9] = [
    (FixedConfiguration::Empty, [
        ([N, N, N, 12, N, N, N], 1), ([N, N, N, 10, N, N, N], 0),
        ([N, N, N, N, N, 10, N], 2), ([12, N, N, N, 18, N, N], 0)], "2.1, [sz4], 2.3"),
    (FixedConfiguration::W, [
        ([N, N, N, N, N, 10, N], 3), ([N, N, N, N, N, 13, N], 0),
        ([16, N, N, N, N, N, N], 0), ([N, 16, N, N, 17, N, N], 0)], "3.1,2,3, 1.10"),
    (FixedConfiguration::Flag, [
        ([N, N, N, N, N, 11, N], 4), ([N, N, N, N, N, 11, N], 0),
        ([N, 17, N, N, N, N, N], 0), ([17, N, N, N, 19, N, N], 0)], "4.1,2, [sz3], 1.10"),
    (FixedConfiguration::OW, [
        ([N, N, N, N, 14, N, N], 5), ([N, N, N, N, 13, N, N], 0),
        ([N, N, N, N, 15, N, N], 0), ([N, N, N, N, 15, N, N], 0)], "4.4,5,6"),
    (FixedConfiguration::Uv, [
        ([N, N, N, N, N, 10, N], 0), ([N, N, N, N, N, 9, N], 0),
        ([N, N, 15, N, N, N, N], 0), ([17, N, N, N, 18, N, N], 0)], "5.1,3,4, 1.10(3)"),
    (FixedConfiguration::Uvw, [
        ([N, N, N, N, N, 10, N], 6), ([N, N, N, N, N, 7, N], 0),
        ([N, 13, N, N, N, N, N], 7), ([N, N, N, N, 14, N, N], 0)], "5.2,3,5"),
    (FixedConfiguration::DoubleFlag, [
        ([N, N, N, N, N, 10, N], 0), ([N, N, N, N, 13, N, N], 0),
        ([14, N, N, N, N, N, N], 0), ([N, N, N, N, 15, N, N], 0)], "6.1,2,4"),
    (FixedConfiguration::Triangle, [
        ([N, N, N, N, N, 9, N], 0), ([N, N, N, N, N, 9, N], 0),
        ([N, N, N, N, N, 11, N], 0), ([N, N, N, N, N, 11, 11], 0)], "[sz4] 6.1, 1.7"),
    (FixedConfiguration::Arbitrary, [
        ([N, N, N, 14, N, N, N], 0), ([N, N, N, 14, N, N, N], 0),
        ([N, 17, N, N, N, N, N], 0), ([17, N, N, N, 19, N, N], 0)], "7.1,2, [sz3]"),
];

pub const FOOTNOTES: [Footnote; 7] = [
    Footnote { id: 1, statement: "dim Δ = 11 ⇒ Δ ≅ SL3ℝ × SO3ℝ", source: "[sz4] Cor. 2.3" },
    Footnote { id: 2, statement: "dim Δ = 10 ⇒ Δ ≅ SL3ℝ × L2", source: "[sz7] Th. 1" },
    Footnote { id: 3, statement: "dim Δ = 10 ⇒ Δ ≅ O′5(ℝ,1) ∨ Δ/Z ≅ O′5(ℝ,2)", source: "3.1" },
    Footnote { id: 4, statement: "dim Δ = 11 ⇒ Δ/Z ≅ PSU3(ℂ,1) × PSL2ℝ ∧ πΔ = 1", source: "[sz4] Th. 3.2" },
    Footnote { id: 5, statement: "dim Δ = 13 ⇒ Δ ≅ U2(ℍ,r) · SU2ℂ", source: "[sz4] Th. 3.3" },
    Footnote { id: 6, statement: "dim Δ = 10 ⇒ Δ/Z ≅ O′5(ℝ,2) ∧ πΔ = 1", source: "[sz4] Th. 4.1" },
    Footnote { id: 7, statement: "dim Δ = 13 ⇒ Δ ≅ ℝ⁴ ⋊ e^ℝ U2ℂ", source: "[sz7] Th. 5" },
];

const fn unital(plane_dimension: u8, planes: &'static str, classes: u8, unitals: &'static str, motion_dimensions: &'static str) -> UnitalSummary {
    UnitalSummary { plane_dimension, planes, classes, unitals, motion_dimensions }
}

pub const UNITALS: [UnitalSummary; 10] = [
    unital(8, "classical", 3, "∅, S7, S5", "21, 21, 15"),
    unital(8, "hughes", 1, "dim U = 5", "6"),
    unital(8, "mutations", 2, "S7, S5", "11, 7"),
    unital(8, "rees", 1, "S5", "7"),
    unital(8, "spin", 2, "S5", "7, 9"),
    unital(8, "double-flag", 2, "S7, S5", "9, 5"),
    unital(16, "classical", 3, "∅, S15, S11", "52, 52, 36"),
    unital(16, "hughes", 1, "dim U = 11", "15"),
    unital(16, "mutations", 2, "S15, S11", "30, 18"),
    unital(16, "double-flag", 2, "S15, S11", "28, ?"),
];

/// All table cells, row by row.
pub fn rows() -> Vec<FactRow> {
    TABLE
        .iter()
        .flat_map(|(fixed, cells, citation)| {
            GroupClass::ALL.into_iter().zip(cells).map(move |(group, (b, note))| FactRow {
                fixed_configuration: *fixed,
                group_class: group,
                bounds: cell(*b),
                footnotes: if *note == 0 { vec![] } else { vec![*note] },
                citation,
            })
        })
        .collect()
}

pub fn lookup(fixed: FixedConfiguration, group: GroupClass) -> Result<FactRow> {
    rows()
        .into_iter()
        .find(|r| r.fixed_configuration == fixed && r.group_class == group)
        .ok_or_else(|| Error::NotFound(format!("no entry for ({}, {})", fixed.id(), group.id())))
}

fn dash(v: Option<u32>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

/// The tab-separated form kept under `data/`.
pub fn render_tsv() -> String {
    let mut out = String::from("# fixed\tclass\tb\tb'\tb''\tb*\tc\td\tg\tnotes\treferences\n");
    for r in rows() {
        let b = r.bounds;
        let notes = if r.footnotes.is_empty() {
            "-".to_string()
        } else {
            r.footnotes.iter().map(u8::to_string).collect::<Vec<_>>().join(",")
        };
        let cells = [b.b, b.b_prime, b.b_double_prime, b.b_star, b.c, b.d, b.g].map(dash).join("\t");
        out.push_str(&format!("{}\t{}\t{cells}\t{notes}\t{}\n", r.fixed_configuration.id(), r.group_class.id(), r.citation));
    }
    out.push_str("\n# note\tstatement\tsource\n");
    for f in &FOOTNOTES {
        out.push_str(&format!("{}\t{}\t{}\n", f.id, f.statement, f.source));
    }
    out.push_str("\n# plane dimension\tplanes\tclasses\tunitals\tdim M\n");
    for u in &UNITALS {
        out.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", u.plane_dimension, u.planes, u.classes, u.unitals, u.motion_dimensions));
    }
    out
}

impl fmt::Display for FactRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.bounds;
        let named = [("b", b.b), ("b'", b.b_prime), ("b''", b.b_double_prime), ("b*", b.b_star), ("c", b.c), ("d", b.d), ("g", b.g)];
        let cells: Vec<String> = named.iter().filter_map(|(n, v)| v.map(|v| format!("{n}={v}"))).collect();
        write!(f, "{:<10} {:<14} {:<16}", self.fixed_configuration.symbol(), self.group_class.id(), cells.join(" "))?;
        let notes: Vec<String> = self.footnotes.iter().map(|n| format!("{n})")).collect();
        write!(f, " {:<4} {}", notes.join(","), self.citation)
    }
}
