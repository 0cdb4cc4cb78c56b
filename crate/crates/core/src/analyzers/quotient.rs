use std::collections::HashMap;

use serde::Serialize;

use super::finite_orbits;
use crate::cantor::Point;
use crate::flow::Flow;
use crate::{Error, Result};

/// `Y = X / R_o` for a pointwise almost periodic system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientSystem {
    pub base: String,
    /// Orbit-closure classes; the quotient points are their indices.
    pub classes: Vec<Vec<Point>>,
    /// `ρ` on the listed points.
    pub projection: Vec<(Point, usize)>,
    /// `Y` is zero-dimensional (it is finite and discrete).
    pub zero_dimensional: bool,
    /// `G` fixes every point of `Y`.
    pub trivial_action: bool,
    /// Each fiber `ρ⁻¹(y)` is a minimal set.
    pub minimal_fibers: bool,
}

impl QuotientSystem {
    pub fn project(&self, x: &Point) -> Option<usize> {
        self.projection.iter().find(|(p, _)| p == x).map(|&(_, c)| c)
    }

    pub fn verified(&self) -> bool {
        self.zero_dimensional && self.trivial_action && self.minimal_fibers
    }
}

/// Collapses each orbit closure to a point. Only systems whose pointwise
/// almost periodicity is certified are accepted: finite actions (classes
/// are orbits) and minimal systems (one class).
pub fn quotient_by_orbit_closure(sys: &dyn Flow) -> Result<QuotientSystem> {
    if let Some(orbits) = finite_orbits(sys)? {
        let index: HashMap<Point, usize> = orbits
            .iter()
            .enumerate()
            .flat_map(|(i, o)| o.iter().map(move |p| (p.clone(), i)))
            .collect();
        let mut trivial_action = true;
        let mut minimal_fibers = true;
        for (c, orbit) in orbits.iter().enumerate() {
            for p in orbit {
                for s in sys.group().gamma() {
                    if index.get(&sys.act(s, p)?) != Some(&c) {
                        trivial_action = false;
                    }
                }
            }
            // A fiber is minimal when the orbit of each of its points is the
            // whole fiber.
            for p in orbit {
                let mut reached = vec![p.clone()];
                let mut head = 0;
                while head < reached.len() {
                    let y = reached[head].clone();
                    head += 1;
                    for s in sys.group().gamma() {
                        let z = sys.act(s, &y)?;
                        if !reached.contains(&z) {
                            reached.push(z);
                        }
                    }
                }
                if reached.len() != orbit.len() {
                    minimal_fibers = false;
                }
            }
        }
        let projection = orbits
            .iter()
            .enumerate()
            .flat_map(|(i, o)| o.iter().map(move |p| (p.clone(), i)))
            .collect();
        return Ok(QuotientSystem {
            base: sys.name(),
            classes: orbits,
            projection,
            zero_dimensional: true,
            trivial_action,
            minimal_fibers,
        });
    }
    if sys.is_minimal() == Some(true) {
        let points = sys.base_points();
        let mut trivial_action = true;
        for p in &points {
            for q in &points {
                if sys.closure_contains(p, q) != Some(true) {
                    trivial_action = false;
                }
            }
        }
        return Ok(QuotientSystem {
            base: sys.name(),
            projection: points.iter().map(|p| (p.clone(), 0)).collect(),
            classes: vec![points],
            zero_dimensional: true,
            trivial_action,
            minimal_fibers: trivial_action,
        });
    }
    Err(Error::QuotientRefused(format!(
        "{}: pointwise almost periodicity is not certified, so R_o need not be an equivalence with minimal classes",
        sys.name()
    )))
}
