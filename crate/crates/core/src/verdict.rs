//! Tri-state verdicts with witnesses.

use std::fmt;

use serde::Serialize;

use crate::cantor::{CellKey, Point};
use crate::group::Element;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    True,
    False,
    Unknown,
}

impl Outcome {
    pub fn is_certified(self) -> bool {
        self != Outcome::Unknown
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Outcome::True => "true",
            Outcome::False => "false",
            Outcome::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

/// Resources a verdict was computed with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub level: Option<usize>,
    pub radius: u64,
    pub samples: usize,
}

impl Budget {
    pub fn radius(radius: u64) -> Self {
        Budget { level: None, radius, samples: 0 }
    }

    pub fn at(level: usize, radius: u64) -> Self {
        Budget { level: Some(level), radius, samples: 0 }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }
}

/// A finite-index subgroup contained in a return-time set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SubgroupWitness {
    /// The whole group.
    Whole,
    /// `m·Z` inside `Z`.
    Multiples { modulus: u64 },
    /// The stabilizer of a point of a finite action.
    Stabilizer { point: usize, index: usize },
}

/// Exactly known return-time structure, supplied by systems with
/// closed-form oracles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ExactReturns {
    Everything,
    /// The returns contain `subgroup`, and `G = transversal · subgroup`.
    Subgroup { subgroup: SubgroupWitness, transversal: Vec<Element> },
    /// The returns are exactly this finite set.
    Finite { elements: Vec<Element> },
    /// The returns are everything except this finite set.
    Cofinite { excluded: Vec<Element> },
}

/// `(x_n, y_n) → (x, y)` with `(x_n, y_n) ∈ R_o` but `y ∉ cl(Gx)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoWitness {
    /// Each entry is `(x_n, y_n, agreement level of x_n with x)`.
    pub sequence: Vec<(Point, Point, usize)>,
    pub limit: (Point, Point),
    /// Level at which `y` is seen outside the closure of `G·x`.
    pub level: usize,
    /// The level-`level` cell of `y`, absent from the closure cells of `x`.
    pub outside_cell: CellKey,
}

/// One step of a separation probe: `y` agrees with the base point through
/// `probe_level`, yet `g·y` and `g·x` separate at `image_level`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationProbe {
    pub y: Point,
    pub probe_level: usize,
    pub g: Element,
    pub image_level: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Witness {
    None,
    Element(Element),
    Elements(Vec<Element>),
    Subgroup(SubgroupWitness),
    Returns(ExactReturns),
    /// Per-level bidirectional returns `(level, positive, negative)`.
    Bidirectional(Vec<(usize, Element, Element)>),
    /// Per-level cone returns `(level, cone index, c)`.
    ConeReturns(Vec<(usize, usize, Element)>),
    /// Type-II evidence: bound `n` and the chosen `c_j` per battery sequence.
    TypeTwo { bound: u64, choices: Vec<Vec<Element>> },
    /// A battery sequence whose K-sets avoid the finite return set.
    AvoidingSequence { sequence: usize, returns: Vec<Element> },
    /// No positive or negative return at `level`.
    MissingReturns { level: usize, returns: Vec<Element> },
    Decomposition(Vec<Vec<Point>>),
    /// `y ∈ cl(Gx)` but `cl(Gy) ⊊ cl(Gx)`.
    StrictClosure { x: Point, y: Point, level: usize },
    Ro(Box<RoWitness>),
    /// `y` close to `x`, yet `g·y` leaves the neighborhood of the closure.
    Escape { x: Point, probes: Vec<(Point, usize, Element)> },
    Separation { x: Point, target_level: usize, probes: Vec<SeparationProbe> },
    /// `g_j·(x, y)` enters the level-`j` diagonal for increasing `j`.
    Asymptotic { x: Point, y: Point, steps: Vec<(Element, usize)> },
    Cells(Vec<CellKey>),
    Points(Vec<Point>),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub exact: bool,
    pub witness: Witness,
    pub budget: Budget,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Verdict {
    pub fn new(outcome: Outcome, exact: bool, witness: Witness, budget: Budget) -> Self {
        Verdict { outcome, exact, witness, budget, note: String::new() }
    }

    pub fn unknown(budget: Budget, note: impl Into<String>) -> Self {
        Verdict {
            outcome: Outcome::Unknown,
            exact: false,
            witness: Witness::None,
            budget,
            note: note.into(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn is_true(&self) -> bool {
        self.outcome == Outcome::True
    }

    pub fn is_false(&self) -> bool {
        self.outcome == Outcome::False
    }

    pub fn is_exact_true(&self) -> bool {
        self.exact && self.is_true()
    }

    pub fn is_exact_false(&self) -> bool {
        self.exact && self.is_false()
    }
}
