use std::collections::HashSet;

use super::{effective_radius, oracle_syndetic, returns_in_ball};
use crate::cantor::Point;
use crate::flow::Flow;
use crate::group::{is_syndetic_window, Element, GroupKind, SetKnowledge};
use crate::verdict::{Budget, ExactReturns, Outcome, SubgroupWitness, Verdict, Witness};
use crate::Result;

/// Largest `n` tried when looking for a syndetic cover `F ⊆ B_n`.
const MAX_COVER: u64 = 32;

/// Largest modulus tried when hunting for `mZ` inside a windowed return set.
const MAX_MODULUS: i64 = 64;

/// Is the return set of `x` to its level-`level` cell syndetic?
pub fn check_ap(sys: &dyn Flow, x: &Point, level: usize, radius: u64) -> Result<Verdict> {
    sys.check_level(level)?;
    let group = sys.group();
    let radius = effective_radius(group, radius);
    let budget = Budget::at(level, radius);
    if let Some(er) = sys.exact_returns(x, level) {
        return Ok(if oracle_syndetic(&er, group) {
            Verdict::new(Outcome::True, true, Witness::Returns(er), budget)
        } else {
            Verdict::new(Outcome::False, true, Witness::Returns(er), budget)
                .with_note("finite return set in an infinite group")
        });
    }
    let max_n = MAX_COVER.min(radius / 2).max(1);
    let outer = effective_radius(group, radius + max_n);
    let inner = outer.saturating_sub(max_n).max(1);
    let returns: HashSet<Element> = returns_in_ball(sys, x, level, outer)?.into_iter().collect();
    let member = |g: &Element| returns.contains(g);
    for n in 1..=max_n.min(inner) {
        let v = is_syndetic_window(group, &member, n, inner, SetKnowledge::Window)?;
        if v.is_true() {
            return Ok(Verdict { budget: Budget::at(level, inner), ..v }
                .with_note(format!("returns cover B_{inner} with translates from B_{n}")));
        }
    }
    Ok(Verdict::unknown(budget, format!("no syndetic cover from B_{max_n} inside B_{inner}")))
}

/// Does the return set to the level-`level` cell contain a finite-index
/// subgroup?
pub fn check_regularly_ap(sys: &dyn Flow, x: &Point, level: usize, radius: u64) -> Result<Verdict> {
    sys.check_level(level)?;
    let group = sys.group();
    let radius = effective_radius(group, radius);
    let budget = Budget::at(level, radius);
    if let Some(er) = sys.exact_returns(x, level) {
        let v = match &er {
            ExactReturns::Everything => {
                Verdict::new(Outcome::True, true, Witness::Subgroup(SubgroupWitness::Whole), budget)
            }
            ExactReturns::Subgroup { subgroup, .. } => {
                Verdict::new(Outcome::True, true, Witness::Subgroup(subgroup.clone()), budget)
            }
            ExactReturns::Finite { .. } if group.is_finite() => {
                Verdict::new(Outcome::True, true, Witness::Elements(vec![group.identity()]), budget)
                    .with_note("the trivial subgroup has finite index")
            }
            ExactReturns::Finite { .. } => Verdict::new(Outcome::False, true, Witness::Returns(er), budget)
                .with_note("a finite set contains no finite-index subgroup of an infinite group"),
            ExactReturns::Cofinite { excluded } if group.is_integers() => {
                let m = excluded
                    .iter()
                    .filter_map(Element::as_int)
                    .map(|n| n.unsigned_abs())
                    .max()
                    .unwrap_or(0)
                    + 1;
                let v = Verdict::new(
                    Outcome::True,
                    true,
                    Witness::Subgroup(SubgroupWitness::Multiples { modulus: m }),
                    budget,
                );
                if excluded.contains(&Element::Int(0)) {
                    Verdict::new(Outcome::False, true, Witness::Returns(er.clone()), budget)
                        .with_note("the identity does not return")
                } else {
                    v
                }
            }
            ExactReturns::Cofinite { .. } => {
                Verdict::unknown(budget, "cofinite returns outside Z are not analysed")
            }
        };
        return Ok(v);
    }
    if !matches!(group.kind(), GroupKind::Integers) {
        return Ok(Verdict::unknown(budget, "windowed subgroup search is implemented for Z only"));
    }
    let returns: HashSet<Element> = returns_in_ball(sys, x, level, radius)?.into_iter().collect();
    let r = radius as i64;
    for m in 1..=MAX_MODULUS.min(r) {
        if (-r / m..=r / m).all(|j| returns.contains(&Element::Int(j * m))) {
            return Ok(Verdict::new(
                Outcome::True,
                false,
                Witness::Subgroup(SubgroupWitness::Multiples { modulus: m as u64 }),
                budget,
            )
            .with_note(format!("every multiple of {m} in B_{radius} returns")));
        }
    }
    Ok(Verdict::unknown(budget, format!("no mZ with m <= {MAX_MODULUS} inside the windowed returns")))
}
