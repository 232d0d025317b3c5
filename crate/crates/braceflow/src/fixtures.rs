//! Desk-scale example inputs.
//!
//! | name | kind | carrier | structure |
//! |------|------|---------|-----------|
//! | T0 | brace | Z/5^3 | trivial |
//! | A1 | pre-Lie | Z/125 | a.b = 5ab |
//! | E1 | pre-Lie | Z/7^5 | a.b = 7ab |
//! | E2 | pre-Lie | Z/7^5 | a.b = 49ab |
//! | M1 | pre-Lie | Z/7^3 x Z/7^2 | found by [`search_m1`] |
//!
//! plus the robustness inputs: a Cayley table on Z/25, the same table
//! with one entry altered, a ring that is not left nilpotent and a header
//! with `n >= p - 1`.
//!
//! The files under `fixtures/` are the golden copies; [`generate`]
//! rebuilds each one and the tests compare the two.

use braceflow_core::flows::flows_brace;
use braceflow_core::{Brace, PGroup, PreLieRing};

use crate::format::{self, BraceBody, BraceDoc, Document, PreLieDoc};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fixture {
    pub name: &'static str,
    pub file: &'static str,
    pub text: &'static str,
}

impl Fixture {
    pub fn document(&self) -> Document {
        format::parse(self.text).expect("golden fixtures parse")
    }

    /// The brace, with pre-Lie fixtures read as their group of flows.
    pub fn brace(&self) -> Brace {
        self.document()
            .to_brace()
            .expect("golden fixtures are valid")
    }

    /// `None` for brace fixtures.
    pub fn ring(&self) -> Option<PreLieRing> {
        match self.document() {
            Document::PreLie(d) => Some(d.ring().expect("golden fixtures are valid")),
            Document::Brace(_) => None,
        }
    }
}

macro_rules! fixture {
    ($name:literal, $file:literal) => {
        Fixture {
            name: $name,
            file: $file,
            text: include_str!(concat!("../fixtures/", $file)),
        }
    };
}

pub const T0: Fixture = fixture!("T0", "t0.brace");
pub const A1: Fixture = fixture!("A1", "a1.prelie");
pub const E1: Fixture = fixture!("E1", "e1.prelie");
pub const E2: Fixture = fixture!("E2", "e2.prelie");
pub const M1: Fixture = fixture!("M1", "m1.prelie");
pub const Z25: Fixture = fixture!("Z25", "z25.brace");
pub const Z25_CORRUPT: Fixture = fixture!("Z25-corrupt", "z25_corrupt.brace");
pub const NON_NILPOTENT: Fixture = fixture!("non-nilpotent", "non_nilpotent.prelie");
pub const ORDER_TOO_LARGE: Fixture = fixture!("order-too-large", "order_too_large.prelie");

/// The five structural fixtures.
pub const SUITE: [Fixture; 5] = [T0, A1, E1, E2, M1];

pub const ALL: [Fixture; 9] = [
    T0,
    A1,
    E1,
    E2,
    M1,
    Z25,
    Z25_CORRUPT,
    NON_NILPOTENT,
    ORDER_TOO_LARGE,
];

pub fn by_name(name: &str) -> Option<Fixture> {
    ALL.iter()
        .copied()
        .find(|f| f.name.eq_ignore_ascii_case(name))
}

fn cyclic_doc(p: u64, e: u32, k: u64) -> Document {
    let g = PGroup::cyclic(p, e).expect("valid fixture group");
    Document::PreLie(PreLieDoc {
        constants: vec![g.element([k])],
        group: g,
    })
}

/// The pair (1, 1) whose entry the corrupted table changes, and the wrong
/// value written there.
pub const CORRUPTED_ENTRY: (u64, u64, u64) = (1, 1, 8);

fn z25_cayley() -> BraceDoc {
    let g = PGroup::cyclic(5, 2).expect("valid fixture group");
    let ring = PreLieRing::cyclic_scaled(&g, 5).expect("valid fixture ring");
    BraceDoc::cayley(&flows_brace(&ring).expect("5ab is nilpotent"))
}

/// Candidate values for each coordinate of an M1 structure constant.
pub const M1_CANDIDATES: [u64; 3] = [0, 7, 14];

/// Rank-2 ring on `Z/7^3 x Z/7^2`: the first tuple
/// `(c11, c12, c21, c22)`, coordinates in [`M1_CANDIDATES`] and compared
/// lexicographically, with `c12 != 0`, `c21 != 0`, the pre-Lie identity on
/// all generator triples and a left chain that reaches 0.
pub fn search_m1() -> PreLieRing {
    let g = PGroup::new(7, &[3, 2]).expect("valid fixture group");
    let gens = g.generators();
    let k = M1_CANDIDATES.len();
    (0..k.pow(8))
        .map(|mut idx| {
            let mut digits = [0u64; 8];
            for d in digits.iter_mut().rev() {
                *d = M1_CANDIDATES[idx % k];
                idx /= k;
            }
            digits
        })
        .filter(|d| d[2..4] != [0, 0] && d[4..6] != [0, 0])
        .filter_map(|d| {
            let consts = d.chunks(2).map(|c| g.element(c.iter().copied())).collect();
            PreLieRing::from_constants(&g, consts).ok()
        })
        .find(|r| {
            let pre_lie = gens.iter().all(|a| {
                gens.iter()
                    .all(|b| gens.iter().all(|c| r.pre_lie_defect(a, b, c).is_zero()))
            });
            pre_lie && r.nilpotency_index().is_ok()
        })
        .expect("the search space contains a solution")
}

const M1_HEADER: [&str; 5] = [
    "M1: first hit of a lexicographic search over (c11, c12, c21, c22),",
    "each coordinate of g_j . g_k in {0, 7, 14}, keeping rings with",
    "c12 != 0 and c21 != 0 that satisfy the pre-Lie identity on generator",
    "triples and are left nilpotent. Rebuilt by fixtures::search_m1 and",
    "compared with this file in the tests.",
];

/// Fresh text for the fixture called `name`.
pub fn generate(name: &str) -> Option<String> {
    let text = match name {
        "T0" => format::serialize(
            &Document::Brace(BraceDoc {
                group: PGroup::cyclic(5, 3).expect("valid fixture group"),
                body: BraceBody::Trivial,
            }),
            &["T0: trivial brace a o b = a + b on Z/5^3"],
        ),
        "A1" => format::serialize(&cyclic_doc(5, 3, 5), &["A1: a.b = 5ab on Z/125"]),
        "E1" => format::serialize(&cyclic_doc(7, 5, 7), &["E1: a.b = 7ab on Z/7^5"]),
        "E2" => format::serialize(&cyclic_doc(7, 5, 49), &["E2: a.b = 49ab on Z/7^5"]),
        "M1" => format::serialize(
            &Document::PreLie(PreLieDoc::from_ring(&search_m1())),
            &M1_HEADER,
        ),
        "Z25" => format::serialize(
            &Document::Brace(z25_cayley()),
            &["group of flows of a.b = 5ab on Z/25 as a Cayley table"],
        ),
        "Z25-corrupt" => {
            let mut doc = z25_cayley();
            let (a, b, v) = CORRUPTED_ENTRY;
            if let BraceBody::Cayley(t) = &mut doc.body {
                t[(a * 25 + b) as usize] = v as u32;
            }
            let note = format!("Z25 with the entry for ({a}) o ({b}) replaced by ({v})");
            format::serialize(&Document::Brace(doc), &[note.as_str()])
        }
        "non-nilpotent" => format::serialize(
            &cyclic_doc(5, 2, 1),
            &["a.b = ab on Z/25: 1 . 1 = 1, never nilpotent"],
        ),
        "order-too-large" => {
            String::from("# n = 4 violates n < p - 1 for p = 5\nprelie v1\np 5\nfactors 4\n")
        }
        _ => return None,
    };
    Some(text)
}
