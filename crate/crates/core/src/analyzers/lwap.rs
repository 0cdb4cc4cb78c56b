use std::collections::BTreeSet;

use super::{effective_radius, orbit_pool, oracle_syndetic};
use crate::cantor::Point;
use crate::flow::Flow;
use crate::group::{BallVariant, Element};
use crate::verdict::{Budget, ExactReturns, Outcome, Verdict, Witness};
use crate::Result;

const LWAP_RADIUS: u64 = 64;
const MAX_F_RADIUS: u64 = 16;
const POINTS_PER_CELL: usize = 16;
const CENTERS: usize = 8;

/// `F·t·y` meets the level cell of `y` for every `t` in the ball and every `y`.
fn serves(sys: &dyn Flow, f: &[Element], ts: &[Element], ys: &[Point], level: usize) -> Result<bool> {
    for y in ys {
        let home = sys.cell_of(y, level)?;
        for t in ts {
            let ty = sys.act(t, y)?;
            let mut ok = false;
            for g in f {
                if sys.cell_of(&sys.act(g, &ty)?, level)? == home {
                    ok = true;
                    break;
                }
            }
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Local weak almost periodicity at `level`: for each sampled `x` a finite
/// `F` and a cell `U` around `x` with `F·t·y` meeting the cell of `y` for
/// all `y ∈ U` and all `t`.
pub fn check_locally_weakly_ap(sys: &dyn Flow, level: usize, radius: u64, sample: &[Point]) -> Result<Verdict> {
    sys.check_level(level)?;
    let group = sys.group();
    let r = effective_radius(group, radius.min(LWAP_RADIUS));
    let budget = Budget::at(level, r).with_samples(sample.len());
    let ts: Vec<Element> = group.ball(r, BallVariant::Closed)?.iter().cloned().collect();
    let level = level.max(1).min(sys.depth());

    // With subgroup returns, G = T·H and F = T⁻¹ serves every t.
    let mut f: BTreeSet<Element> = BTreeSet::new();
    let mut all_subgroup = !sample.is_empty();
    for x in sample {
        match sys.exact_returns(x, level) {
            Some(ExactReturns::Subgroup { transversal, .. }) => {
                f.extend(transversal.iter().map(|g| group.invert_unchecked(g)));
            }
            Some(ExactReturns::Everything) => {
                f.insert(group.identity());
            }
            Some(er) if !oracle_syndetic(&er, group) => {
                return Ok(Verdict::new(Outcome::False, true, Witness::Returns(er), budget)
                    .with_note(format!("{x} is not almost periodic")));
            }
            _ => all_subgroup = false,
        }
    }
    let caps = sys.capabilities();
    let uniform = caps.finite || (caps.level_equivariant && group.is_abelian());
    if all_subgroup && uniform {
        let f: Vec<Element> = f.into_iter().collect();
        if serves(sys, &f, &ts, sample, level)? {
            let note = if caps.finite {
                "finite action: inverse orbit transversals, U a singleton cell"
            } else {
                "level-equivariant abelian action: one transversal serves every point, U = X"
            };
            return Ok(Verdict::new(Outcome::True, true, Witness::Elements(f), budget).with_note(note));
        }
        return Ok(Verdict::unknown(budget, "transversal inverses failed the windowed replay"));
    }

    let pool = orbit_pool(sys, sample, r)?;
    let mut n_max = 0;
    for x in sample.iter().take(CENTERS) {
        let home = sys.cell_of(x, level)?;
        let mut ys = vec![x.clone()];
        for y in &pool {
            if ys.len() >= POINTS_PER_CELL {
                break;
            }
            if y != x && sys.cell_of(y, level)? == home {
                ys.push(y.clone());
            }
        }
        let mut found = None;
        for n in 0..=MAX_F_RADIUS.min(r) {
            let f: Vec<Element> = group.ball(n, BallVariant::Closed)?.iter().cloned().collect();
            if serves(sys, &f, &ts, &ys, level)? {
                found = Some(n);
                break;
            }
        }
        match found {
            Some(n) => n_max = n_max.max(n),
            None => {
                return Ok(Verdict::unknown(
                    budget,
                    format!("no F inside B_{MAX_F_RADIUS} serves the level-{level} cell of {x}"),
                ))
            }
        }
    }
    let f = group.ball(n_max, BallVariant::Closed)?.iter().cloned().collect();
    Ok(Verdict::new(Outcome::True, false, Witness::Elements(f), budget)
        .with_note(format!("F = B_{n_max} serves every sampled cell")))
}
