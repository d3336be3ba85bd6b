//! Essential parts that admit `(m-2)`-perfect codes, and the classifier.
//!
//! With `r = m - 2`, a perfect code exists exactly when the essential part at
//! radius `r` (with radius `r - u` on it) is isomorphic to one of four small
//! posets: the 5-antichain at radius 2, the 7-antichain at radius 1, an
//! 8-element and a 9-element height-two poset at radii 2 and 3. Each comes
//! with a code that is perfect on it.

use serde::Serialize;

use crate::canon::isomorphism;
use crate::codes::{Code, CodeRepr};
use crate::criteria::reduce;
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::subset::Subset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeId {
    /// Five incomparable elements, radius 2, repetition code.
    FiveAntichain,
    /// Seven incomparable elements, radius 1, Hamming code.
    SevenAntichain,
    /// Six maximal over two nonmaximal elements (below four and two of them),
    /// radius 2, extended Hamming code.
    TwoBelowSix,
    /// Six maximal over three nonmaximal elements (each below four, each
    /// maximal above two), radius 3.
    ThreeBelowSix,
}

pub const SHAPES: [ShapeId; 4] = [
    ShapeId::FiveAntichain,
    ShapeId::SevenAntichain,
    ShapeId::TwoBelowSix,
    ShapeId::ThreeBelowSix,
];

fn words(list: &[&str]) -> Vec<Subset> {
    list.iter()
        .map(|w| Subset::parse_word(w).expect("static word").1)
        .collect()
}

/// `span{1234, 1256, 1278, 1357}`: the extended Hamming code of length 8.
pub fn code_z() -> Code {
    Code::span(8, &words(&["11110000", "11001100", "11000011", "10101010"])).expect("static code")
}

/// `span{1267, 1345, 2389, 1469}`, length 9.
pub fn code_y() -> Code {
    Code::span(9, &words(&["110001100", "101110000", "011000011", "100101001"])).expect("static code")
}

/// Hamming code of length 7: column `i` is the binary expansion of `i`.
pub fn hamming7() -> Code {
    Code::linear(7, 3, (1..=7).collect()).expect("static code")
}

pub fn repetition(n: usize) -> Code {
    Code::explicit(n, vec![Subset::EMPTY, Subset::full(n)]).expect("static code")
}

impl ShapeId {
    /// Radius on the essential part.
    pub fn radius(self) -> usize {
        match self {
            ShapeId::FiveAntichain | ShapeId::TwoBelowSix => 2,
            ShapeId::SevenAntichain => 1,
            ShapeId::ThreeBelowSix => 3,
        }
    }

    /// The poset, labelled so that [`ShapeId::code`] is perfect on it.
    pub fn poset(self) -> Poset {
        let covers: &[(usize, usize)] = match self {
            ShapeId::FiveAntichain => return Poset::antichain(5).expect("static poset"),
            ShapeId::SevenAntichain => return Poset::antichain(7).expect("static poset"),
            ShapeId::TwoBelowSix => &S2_COVERS,
            ShapeId::ThreeBelowSix => &S3_COVERS,
        };
        let n = match self {
            ShapeId::TwoBelowSix => 8,
            _ => 9,
        };
        Poset::from_covers_one_based(n, covers).expect("static poset")
    }

    pub fn code(self) -> Code {
        match self {
            ShapeId::FiveAntichain => repetition(5),
            ShapeId::SevenAntichain => hamming7(),
            ShapeId::TwoBelowSix => code_z(),
            ShapeId::ThreeBelowSix => code_y(),
        }
    }
}

// Labellings found by `search::find_poset_labeling`; tests re-derive them.
const S2_COVERS: [(usize, usize); 6] = [(1, 3), (1, 4), (2, 5), (2, 6), (2, 7), (2, 8)];
const S3_COVERS: [(usize, usize); 12] = [
    (1, 4), (1, 5), (1, 8), (1, 9),
    (2, 4), (2, 5), (2, 6), (2, 7),
    (3, 6), (3, 7), (3, 8), (3, 9),
];

/// The 8-element poset with six maximal elements over two nonmaximal ones,
/// each below three; no 2-perfect code exists on it.
pub fn split_three_three() -> Poset {
    Poset::from_covers_one_based(8, &[(1, 3), (1, 4), (1, 5), (2, 6), (2, 7), (2, 8)]).expect("static poset")
}

/// `pairs` disjoint two-element chains.
pub fn matching(pairs: usize) -> Poset {
    Poset::disjoint_chains(&vec![2; pairs]).expect("static poset")
}

/// One element below the first of `tops` otherwise isolated maximal elements.
pub fn pendant(tops: usize) -> Poset {
    Poset::from_covers_one_based(tops + 1, &[(1, 2)]).expect("static poset")
}

/// Two pendant pairs plus `isolated` further elements.
pub fn two_pendants(isolated: usize) -> Poset {
    Poset::from_covers_one_based(4 + isolated, &[(1, 2), (3, 4)]).expect("static poset")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum M2Verdict {
    Admissible { shape: ShapeId, code: Code },
    Inadmissible { essential_size: usize, radius: usize },
}

fn relabel_code(code: &Code, map: &[usize]) -> Result<Code> {
    let n = code.n();
    match code.repr() {
        CodeRepr::Explicit(ws) => Code::explicit(n, ws.iter().map(|w| w.iter().map(|i| map[i]).collect()).collect()),
        CodeRepr::Linear { m, columns } => {
            let mut out = vec![0; n];
            for (i, &c) in columns.iter().enumerate() {
                out[map[i]] = c;
            }
            Code::linear(n, *m, out)
        }
    }
}

/// Decides whether `(m-2)`-perfect codes of codimension `m` exist on `P`, and
/// returns one when they do.
pub fn classify_m2(poset: &Poset, m: usize) -> Result<M2Verdict> {
    if m < 2 {
        return Err(Error::Precondition(format!("needs m >= 2, got {m}")));
    }
    let red = reduce(poset, m - 2)?;
    for shape in SHAPES {
        if shape.radius() != red.r {
            continue;
        }
        let model = shape.poset();
        if let Some(map) = isomorphism(&model, &red.poset) {
            let code = red.lift(&relabel_code(&shape.code(), &map)?)?;
            return Ok(M2Verdict::Admissible { shape, code });
        }
    }
    Ok(M2Verdict::Inadmissible {
        essential_size: red.poset.len(),
        radius: red.r,
    })
}
