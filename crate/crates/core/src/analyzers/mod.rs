//! Tri-state checkers for the recurrence conditions and the cross-checker
//! that ties them together.
//!
//! Every checker answers `True`, `False` or `Unknown`. Certified answers
//! carry a witness that [`replay`] can re-verify against the flow. A verdict
//! is `exact` only when a closed-form oracle of the system backs it; windowed
//! scans produce evidence.

mod battery;
mod closure;
mod equivalence;
mod lwap;
mod metric;
mod quotient;
mod recurrence;
pub mod replay;
mod returns;

use std::collections::HashSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cantor::{ClopenSet, Point};
use crate::flow::Flow;
use crate::group::{BallVariant, Element, Group};
use crate::verdict::ExactReturns;
use crate::Result;

pub use battery::{clopen_battery, sequence_battery, SequenceKind};
pub use closure::{
    check_continuity_finite, check_minimal_decomposition, check_orbit_map_usc, check_ro_closed,
    compute_u_star, finite_orbits, UStar,
};
pub use equivalence::{
    cross_check_equivalences, cross_check_with, ConditionVerdict, EquivalenceReport, PointRecord,
    Violation,
};
pub use lwap::check_locally_weakly_ap;
pub use metric::{check_distal, check_equicontinuous};
pub use quotient::{quotient_by_orbit_closure, QuotientSystem};
pub use recurrence::{
    check_recurrence_type1, check_recurrence_type2, type1_bidirectional, type1_cones,
};
pub use returns::{check_ap, check_regularly_ap};

/// Most elements a ball may have before analyzers shrink the radius.
pub const BALL_LIMIT: u128 = 10_000;

/// Radius used by pair and probe searches, which are quadratic in the pool.
pub const PROBE_RADIUS: u64 = 128;

/// Budget shared by all conditions in one analysis run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisBudget {
    pub level: usize,
    pub radius: u64,
    pub samples: usize,
    pub seed: u64,
    #[serde(default = "default_sequences")]
    pub sequences: Vec<SequenceKind>,
    /// Extra clopen sets for condition (8), as `(level, cells)`.
    #[serde(skip)]
    pub clopens: Vec<ClopenSet>,
}

fn default_sequences() -> Vec<SequenceKind> {
    SequenceKind::defaults()
}

impl AnalysisBudget {
    pub fn new(level: usize, radius: u64, samples: usize, seed: u64) -> Self {
        AnalysisBudget {
            level,
            radius,
            samples,
            seed,
            sequences: default_sequences(),
            clopens: Vec::new(),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// The nine conditions checked for mutual equivalence, in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    TypeOne,
    TypeTwo,
    PointwiseAp,
    MinimalUnion,
    OrbitRelationClosed,
    OrbitMapContinuous,
    OrbitMapUsc,
    InvariantCoreOpen,
    LocallyWeaklyAp,
}

impl Condition {
    pub const ALL: [Condition; 9] = [
        Condition::TypeOne,
        Condition::TypeTwo,
        Condition::PointwiseAp,
        Condition::MinimalUnion,
        Condition::OrbitRelationClosed,
        Condition::OrbitMapContinuous,
        Condition::OrbitMapUsc,
        Condition::InvariantCoreOpen,
        Condition::LocallyWeaklyAp,
    ];

    /// 1-based position in the list.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Condition::TypeOne => "recurrent-type-1",
            Condition::TypeTwo => "recurrent-type-2",
            Condition::PointwiseAp => "pointwise-ap",
            Condition::MinimalUnion => "union-of-minimal-sets",
            Condition::OrbitRelationClosed => "orbit-relation-closed",
            Condition::OrbitMapContinuous => "orbit-map-continuous",
            Condition::OrbitMapUsc => "orbit-map-usc",
            Condition::InvariantCoreOpen => "invariant-core-open",
            Condition::LocallyWeaklyAp => "locally-weakly-ap",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.number(), self.name())
    }
}

/// Largest radius `≤ radius` whose closed ball has at most [`BALL_LIMIT`]
/// elements.
pub fn effective_radius(group: &Group, radius: u64) -> u64 {
    let mut r = radius;
    while r > 1 && group.closed_ball_size(r).is_some_and(|n| n > BALL_LIMIT) {
        r = if r > 64 { r * 3 / 4 } else { r - 1 };
    }
    r
}

/// Designated points followed by seeded random samples, deduplicated.
pub fn point_pool(sys: &dyn Flow, samples: usize, seed: u64) -> Vec<Point> {
    if let Some(all) = sys.all_points() {
        return all;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    sys.base_points()
        .into_iter()
        .chain(sys.sample_points(&mut rng, samples))
        .filter(|p| seen.insert(p.clone()))
        .collect()
}

/// Translates `g·z` of the pool points for `g` in a closed ball, used when
/// hunting for nearby points.
pub(crate) fn orbit_pool(sys: &dyn Flow, seeds: &[Point], radius: u64) -> Result<Vec<Point>> {
    let ball = sys.group().ball(effective_radius(sys.group(), radius), BallVariant::Closed)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for z in seeds {
        for g in ball.iter() {
            let y = sys.act(g, z)?;
            if seen.insert(y.clone()) {
                out.push(y);
            }
        }
    }
    Ok(out)
}

/// `t·x ∈ cell_level(x)`.
pub(crate) fn returns_to_cell(sys: &dyn Flow, x: &Point, level: usize, t: &Element) -> Result<bool> {
    Ok(sys.cell_of(&sys.act(t, x)?, level)? == sys.cell_of(x, level)?)
}

/// Returns of `x` to its level cell inside the closed ball, in canonical order.
pub(crate) fn returns_in_ball(sys: &dyn Flow, x: &Point, level: usize, radius: u64) -> Result<Vec<Element>> {
    let home = sys.cell_of(x, level)?;
    let ball = sys.group().ball(radius, BallVariant::Closed)?;
    let mut out = Vec::new();
    for t in ball.iter() {
        if sys.cell_of(&sys.act(t, x)?, level)? == home {
            out.push(t.clone());
        }
    }
    Ok(out)
}

/// Whether an exactly known return set is syndetic.
pub(crate) fn oracle_syndetic(er: &ExactReturns, group: &Group) -> bool {
    match er {
        ExactReturns::Finite { .. } => group.is_finite(),
        _ => true,
    }
}
