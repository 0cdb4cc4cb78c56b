//! Re-verification of verdict witnesses against the flow oracles.
//!
//! A replay never trusts the analyzer that produced the witness: it recomputes
//! cells, actions and oracle answers from scratch. Witness kinds that carry no
//! checkable content replay trivially.

use std::collections::BTreeSet;

use super::{effective_radius, PROBE_RADIUS};
use crate::cantor::{separation_level, CellKey, Point};
use crate::flow::{orbit_closure_cells, Flow};
use crate::group::{BallVariant, Element};
use crate::verdict::{ExactReturns, SubgroupWitness, Verdict, Witness};
use crate::Result;

fn returns(sys: &dyn Flow, x: &Point, level: usize, t: &Element) -> Result<bool> {
    Ok(sys.cell_of(&sys.act(t, x)?, level)? == sys.cell_of(x, level)?)
}

fn closure_cells(sys: &dyn Flow, x: &Point, level: usize) -> Result<BTreeSet<CellKey>> {
    match sys.exact_closure_cells(x, level) {
        Some(c) => Ok(c),
        None => Ok(orbit_closure_cells(sys, x, level, effective_radius(sys.group(), PROBE_RADIUS))?.cells),
    }
}

fn replay_returns(sys: &dyn Flow, x: &Point, level: usize, radius: u64, er: &ExactReturns) -> Result<bool> {
    let ball = sys.group().ball(effective_radius(sys.group(), radius.min(PROBE_RADIUS)), BallVariant::Closed)?;
    match er {
        ExactReturns::Everything => {
            for t in ball.iter() {
                if !returns(sys, x, level, t)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ExactReturns::Finite { elements } => {
            for t in ball.iter() {
                if returns(sys, x, level, t)? != elements.contains(t) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ExactReturns::Cofinite { excluded } => {
            for t in ball.iter() {
                if returns(sys, x, level, t)? == excluded.contains(t) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ExactReturns::Subgroup { subgroup, transversal } => {
            let group = sys.group();
            match subgroup {
                SubgroupWitness::Whole => {}
                SubgroupWitness::Multiples { modulus } => {
                    for j in -4..=4i64 {
                        if !returns(sys, x, level, &Element::Int(j * *modulus as i64))? {
                            return Ok(false);
                        }
                    }
                }
                SubgroupWitness::Stabilizer { index, .. } => {
                    // Distinct images of the transversal: one per coset.
                    let images: BTreeSet<String> = transversal
                        .iter()
                        .map(|g| sys.act(g, x).map(|p| p.to_string()))
                        .collect::<Result<_>>()?;
                    if images.len() != *index || transversal.len() != *index {
                        return Ok(false);
                    }
                }
            }
            // G = T·H: every ball element t has some τ with τ⁻¹·t returning.
            for t in ball.iter() {
                let mut covered = false;
                for tau in transversal {
                    let s = group.compose(&group.invert(tau)?, t)?;
                    if returns(sys, x, level, &s)? {
                        covered = true;
                        break;
                    }
                }
                if !covered {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Replays the witness of `v`. Pointwise witnesses need the point `x` they
/// were computed at.
pub fn replay(sys: &dyn Flow, x: Option<&Point>, v: &Verdict) -> Result<bool> {
    let level = v.budget.level.unwrap_or(1);
    let radius = v.budget.radius;
    let group = sys.group();
    match (&v.witness, x) {
        (Witness::Returns(er), Some(x)) => replay_returns(sys, x, level, radius, er),
        (Witness::Subgroup(SubgroupWitness::Multiples { modulus }), Some(x)) => {
            let m = *modulus as i64;
            let r = radius.min(PROBE_RADIUS) as i64;
            for j in -r / m..=r / m {
                if !returns(sys, x, level, &Element::Int(j * m))? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Witness::Elements(f), Some(x)) if v.is_true() => {
            // Syndetic cover: every h in the window is f·s with s a return.
            let ball = group.ball(effective_radius(group, radius.min(PROBE_RADIUS)), BallVariant::Closed)?;
            for h in ball.iter() {
                let mut ok = false;
                for g in f {
                    if returns(sys, x, level, &group.compose(&group.invert(g)?, h)?)? {
                        ok = true;
                        break;
                    }
                }
                if !ok {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Witness::Bidirectional(steps), Some(x)) => {
            for (j, p, n) in steps {
                let (Some(pi), Some(ni)) = (p.as_int(), n.as_int()) else {
                    return Ok(false);
                };
                if pi < *j as i64 || ni > -(*j as i64) {
                    return Ok(false);
                }
                if !returns(sys, x, *j, p)? || !returns(sys, x, *j, n)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Witness::ConeReturns(hits), Some(x)) => {
            for (j, _, c) in hits {
                if !returns(sys, x, *j, c)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Witness::MissingReturns { level, returns: rs }, Some(x)) => Ok(
            sys.exact_returns(x, *level) == Some(ExactReturns::Finite { elements: rs.clone() })
                && replay_returns(sys, x, *level, radius, &ExactReturns::Finite { elements: rs.clone() })?,
        ),
        (Witness::AvoidingSequence { returns: rs, .. }, Some(x)) => {
            Ok(sys.exact_returns(x, level) == Some(ExactReturns::Finite { elements: rs.clone() }))
        }
        (Witness::TypeTwo { bound, choices }, Some(x)) => {
            for c in choices.iter().flatten() {
                if group.word_length(c) > *bound || !returns(sys, x, level, c)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Witness::Escape { x, probes }, _) => {
            let v_cells = closure_cells(sys, x, level)?;
            for (y, k, g) in probes {
                if sys.cell_of(y, *k)? != sys.cell_of(x, *k)? {
                    return Ok(false);
                }
                if v_cells.contains(&sys.cell_of(&sys.act(g, y)?, level)?.key) {
                    return Ok(false);
                }
            }
            Ok(!probes.is_empty())
        }
        (Witness::Separation { x, target_level, probes }, _) => {
            for p in probes {
                let near = separation_level(sys, x, &p.y, sys.depth())?.value();
                let gx = sys.act(&p.g, x)?;
                let gy = sys.act(&p.g, &p.y)?;
                let far = separation_level(sys, &gx, &gy, *target_level)?.value();
                if near <= p.probe_level || far > *target_level {
                    return Ok(false);
                }
            }
            Ok(!probes.is_empty())
        }
        (Witness::Asymptotic { x, y, steps }, _) => {
            if x == y {
                return Ok(false);
            }
            let mut last = 0;
            for (g, j) in steps {
                let agree = separation_level(sys, &sys.act(g, x)?, &sys.act(g, y)?, sys.depth())?.value();
                if *j <= last || agree <= *j {
                    return Ok(false);
                }
                last = *j;
            }
            Ok(!steps.is_empty())
        }
        (Witness::StrictClosure { x, y, level }, _) => {
            let (Some(cx), Some(cy)) = (sys.exact_closure_cells(x, *level), sys.exact_closure_cells(y, *level)) else {
                return Ok(false);
            };
            Ok(sys.closure_contains(x, y) == Some(true) && cy.is_subset(&cx) && cy != cx)
        }
        (Witness::Ro(w), _) => {
            let mut last = 0;
            for (xn, yn, agree) in &w.sequence {
                // y_n sits in a cell met by the orbit of x_n.
                let cells = closure_cells(sys, xn, w.level)?;
                if !cells.contains(&sys.cell_of(yn, w.level)?.key) {
                    return Ok(false);
                }
                let seen = separation_level(sys, xn, &w.limit.0, sys.depth())?.value();
                if *agree <= last || seen <= *agree || *yn != w.limit.1 {
                    return Ok(false);
                }
                last = *agree;
            }
            let (x, y) = &w.limit;
            let outside = sys.cell_of(y, w.level)?.key;
            let cells = closure_cells(sys, x, w.level)?;
            Ok(outside == w.outside_cell && !cells.contains(&outside) && !w.sequence.is_empty())
        }
        (Witness::Decomposition(parts), _) if sys.all_points().is_some() => {
            for part in parts {
                for p in part {
                    for s in group.gamma() {
                        if !part.contains(&sys.act(s, p)?) {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
        _ => Ok(true),
    }
}
