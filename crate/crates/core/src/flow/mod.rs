//! Concrete flows `(G, X)` and the orbit machinery shared by the analyzers.

mod finite;
mod odometer;
mod one_dot;
mod product;
mod substitution;

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::RngCore;
use serde::Serialize;

use crate::cantor::{Cell, CellKey, CellSpace, ClopenSet, Point};
use crate::group::{BallVariant, Element, Group};
use crate::verdict::ExactReturns;
use crate::Result;

pub use finite::{build_finite_action, random_finite_action, FiniteAction};
pub use odometer::{build_odometer, Odometer};
pub use one_dot::{build_one_dot_subshift, OneDot};
pub use product::{product, ProductFlow};
pub use substitution::{build_substitution_subshift, Substitution};

/// Which sub-oracles of a system are exact.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Capabilities {
    pub exact_language: bool,
    pub exact_return_sets: bool,
    pub level_equivariant: bool,
    pub finite: bool,
}

/// A group acting on a partition-presented space.
pub trait Flow: CellSpace {
    fn name(&self) -> String;

    fn group(&self) -> &Group;

    fn capabilities(&self) -> Capabilities;

    /// `g·x`. Must satisfy `e·x = x` and `(st)·x = s·(t·x)`.
    fn act(&self, g: &Element, x: &Point) -> Result<Point>;

    /// Designated points every analysis visits.
    fn base_points(&self) -> Vec<Point>;

    /// Random points of the space.
    fn sample_points(&self, rng: &mut dyn RngCore, n: usize) -> Vec<Point>;

    /// Exact return structure of `x` to its own level-`level` cell.
    fn exact_returns(&self, _x: &Point, _level: usize) -> Option<ExactReturns> {
        None
    }

    /// Exact level-`level` cells met by `cl(Gx)`.
    fn exact_closure_cells(&self, _x: &Point, _level: usize) -> Option<BTreeSet<CellKey>> {
        None
    }

    /// Exact answer to `y ∈ cl(Gx)`.
    fn closure_contains(&self, _x: &Point, _y: &Point) -> Option<bool> {
        None
    }

    /// `Some(true)` when the whole space is known to be minimal.
    fn is_minimal(&self) -> Option<bool> {
        None
    }

    /// Every point, for finite spaces.
    fn all_points(&self) -> Option<Vec<Point>> {
        None
    }

    /// System-specific clopen sets worth testing, e.g. cylinders of a
    /// distinguished fixed point.
    fn designated_clopens(&self) -> Vec<ClopenSet> {
        Vec::new()
    }

    /// Pairs of points known to be distinct and worth probing for proximality.
    fn probe_pairs(&self) -> Vec<(Point, Point)> {
        Vec::new()
    }
}

pub type SharedFlow = Arc<dyn Flow>;

/// `N_G(x, U) ∩ B_R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReturnSet {
    pub point: Point,
    pub target: ClopenSet,
    pub radius: u64,
    pub elements: Vec<Element>,
    pub exact: bool,
}

impl ReturnSet {
    pub fn contains(&self, g: &Element) -> bool {
        self.elements.contains(g)
    }
}

/// Every `t` in the closed ball of radius `radius` with `t·x ∈ U`.
pub fn return_times(sys: &dyn Flow, x: &Point, target: &ClopenSet, radius: u64) -> Result<ReturnSet> {
    let ball = sys.group().ball(radius, BallVariant::Closed)?;
    let mut elements = Vec::new();
    for t in ball.iter() {
        if target.contains(sys, &sys.act(t, x)?)? {
            elements.push(t.clone());
        }
    }
    Ok(ReturnSet {
        point: x.clone(),
        target: target.clone(),
        radius,
        elements,
        exact: sys.capabilities().exact_return_sets,
    })
}

/// Level-`level` cells met by the ball-`radius` orbit of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitClosureApprox {
    pub point: Point,
    pub level: usize,
    pub radius: u64,
    pub cells: BTreeSet<CellKey>,
    /// The sampled cells coincide with the exact closure cells.
    pub exact: bool,
}

pub fn orbit_closure_cells(sys: &dyn Flow, x: &Point, level: usize, radius: u64) -> Result<OrbitClosureApprox> {
    sys.check_level(level)?;
    let ball = sys.group().ball(radius, BallVariant::Closed)?;
    let mut cells = BTreeSet::new();
    for g in ball.iter() {
        cells.insert(sys.cell_of(&sys.act(g, x)?, level)?.key);
    }
    let exact = sys.capabilities().exact_language
        && sys.exact_closure_cells(x, level).is_some_and(|e| e == cells);
    Ok(OrbitClosureApprox { point: x.clone(), level, radius, cells, exact })
}

/// Checks `e·x = x` and `(st)·x = s·(t·x)` on the given triples, returning
/// the first failing triple.
pub fn check_action_axioms(
    sys: &dyn Flow,
    triples: &[(Element, Element, Point)],
    level: usize,
) -> Result<Option<(Element, Element, Point)>> {
    let group = sys.group();
    let e = group.identity();
    for (s, t, x) in triples {
        // Points have canonical representations, so equality is structural;
        // the cell comparison also exercises addressing at `level`.
        let same = |a: &Point, b: &Point| -> Result<bool> {
            Ok(a == b && sys.cell_of(a, level)? == sys.cell_of(b, level)?)
        };
        if !same(&sys.act(&e, x)?, x)? {
            return Ok(Some((e.clone(), e.clone(), x.clone())));
        }
        let st = group.compose(s, t)?;
        if !same(&sys.act(&st, x)?, &sys.act(s, &sys.act(t, x)?)?)? {
            return Ok(Some((s.clone(), t.clone(), x.clone())));
        }
    }
    Ok(None)
}

/// The level-`level` cell of `x` as a clopen set.
pub fn cell_neighborhood(sys: &dyn Flow, x: &Point, level: usize) -> Result<ClopenSet> {
    Ok(ClopenSet::cylinder(sys.cell_of(x, level)?))
}

pub(crate) fn root_or(level: usize, key: impl FnOnce() -> CellKey) -> Cell {
    if level == 0 {
        Cell::root()
    } else {
        Cell::new(level, key())
    }
}
