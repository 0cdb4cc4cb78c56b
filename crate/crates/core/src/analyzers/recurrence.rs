use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{effective_radius, oracle_syndetic, returns_in_ball, returns_to_cell, sequence_battery, SequenceKind};
use crate::cantor::Point;
use crate::flow::Flow;
use crate::group::{Element, KVariant};
use crate::verdict::{Budget, ExactReturns, Outcome, Verdict, Witness};
use crate::{Error, Result};

/// How far past the window a return is chased once an oracle says it exists.
const CHASE_LIMIT: i64 = 1 << 16;

/// Whether the exact return set has an element `v` with `sign·v ≥ j`.
fn returns_beyond(er: &ExactReturns, sign: i64, j: u64) -> bool {
    match er {
        ExactReturns::Finite { elements } => elements
            .iter()
            .filter_map(Element::as_int)
            .any(|v| sign * v >= j as i64),
        // Finite-index subgroups and cofinite sets of Z are unbounded both ways.
        _ => true,
    }
}

fn finite_elements(er: &ExactReturns) -> Vec<Element> {
    match er {
        ExactReturns::Finite { elements } => elements.clone(),
        _ => Vec::new(),
    }
}

/// First `i` with `j ≤ i ≤ limit` and `(sign·i)·x` in the level-`j` cell.
fn first_return(sys: &dyn Flow, x: &Point, j: usize, sign: i64, limit: i64) -> Result<Option<i64>> {
    for i in j as i64..=limit {
        if returns_to_cell(sys, x, j, &Element::Int(sign * i))? {
            return Ok(Some(sign * i));
        }
    }
    Ok(None)
}

/// Type-I recurrence for `Z`-systems via returns in both time directions:
/// for every level `j ≤ level`, some `i ∈ [j, R]` and `i' ∈ [-R, -j]` bring
/// `x` back into its level-`j` cell.
pub fn type1_bidirectional(sys: &dyn Flow, x: &Point, level: usize, radius: u64) -> Result<Verdict> {
    sys.check_level(level)?;
    if !sys.group().is_integers() {
        return Err(Error::InvalidGroup("the bidirectional criterion needs Z".into()));
    }
    let budget = Budget::at(level, radius);
    let r = radius as i64;
    let mut found = Vec::new();
    let mut exact = true;
    for j in 1..=level {
        let oracle = sys.exact_returns(x, j);
        if let Some(er) = &oracle {
            if !returns_beyond(er, 1, j as u64) || !returns_beyond(er, -1, j as u64) {
                return Ok(Verdict::new(
                    Outcome::False,
                    true,
                    Witness::MissingReturns { level: j, returns: finite_elements(er) },
                    budget,
                )
                .with_note(format!("the return set is finite: no return at distance {j} or more in some direction")));
            }
        } else {
            exact = false;
        }
        let limit = if oracle.is_some() { r.max(CHASE_LIMIT) } else { r };
        let pos = first_return(sys, x, j, 1, limit)?;
        let neg = first_return(sys, x, j, -1, limit)?;
        match (pos, neg) {
            (Some(p), Some(n)) => found.push((j, Element::Int(p), Element::Int(n))),
            _ if oracle.is_some() => {}
            _ => {
                return Ok(Verdict::unknown(
                    budget,
                    format!("no return to the level-{j} cell at distance in [{j}, {radius}] in both directions"),
                ))
            }
        }
    }
    Ok(Verdict::new(Outcome::True, exact, Witness::Bidirectional(found), budget))
}

/// `Some(sign)` when a stabilized cone of `Z` is exactly `±{1..R}`.
fn half_line(lower: &[Element], radius: u64) -> Option<i64> {
    let vals: Vec<i64> = lower.iter().filter_map(Element::as_int).collect();
    if vals.len() != radius as usize || vals.len() != lower.len() {
        return None;
    }
    if vals.iter().all(|&v| v > 0) {
        Some(1)
    } else if vals.iter().all(|&v| v < 0) {
        Some(-1)
    } else {
        None
    }
}

/// Type-I recurrence through the stabilized cone approximations of the
/// battery. Unstabilized cones are skipped.
pub fn type1_cones(
    sys: &dyn Flow,
    x: &Point,
    level: usize,
    radius: u64,
    battery: &[(SequenceKind, Vec<Element>)],
) -> Result<Verdict> {
    sys.check_level(level)?;
    let group = sys.group();
    let radius = effective_radius(group, radius);
    let budget = Budget::at(level, radius);
    let mut cones = Vec::new();
    for (_, seq) in battery {
        let approx = group.cone_approx(seq, radius, KVariant::Punctured)?;
        if approx.stabilized {
            cones.push(approx.lower);
        }
    }
    let skipped = battery.len() - cones.len();
    let skipped_note = if skipped > 0 { format!("{skipped} unstabilized cone(s) skipped") } else { String::new() };
    if cones.is_empty() {
        if battery.is_empty() && group.is_finite() {
            return Ok(Verdict::new(Outcome::True, true, Witness::None, budget)
                .with_note("finite phase group: no cones"));
        }
        return Ok(Verdict::unknown(budget, "no stabilized cone in the battery"));
    }
    let mut hits = Vec::new();
    if group.is_integers() {
        let mut exact = true;
        for j in 1..=level {
            let oracle = sys.exact_returns(x, j);
            for (ci, cone) in cones.iter().enumerate() {
                let sign = half_line(cone, radius);
                if let (Some(er), Some(sign)) = (&oracle, sign) {
                    if !returns_beyond(er, sign, j as u64) {
                        return Ok(Verdict::new(
                            Outcome::False,
                            true,
                            Witness::MissingReturns { level: j, returns: finite_elements(er) },
                            budget,
                        )
                        .with_note(format!("cone {ci} is a half-line without returns past {j}")));
                    }
                }
                let mut hit = None;
                for c in cone.iter().filter(|c| c.as_int().is_some_and(|v| v.unsigned_abs() >= j as u64)) {
                    if returns_to_cell(sys, x, j, c)? {
                        hit = Some(c.clone());
                        break;
                    }
                }
                if hit.is_none() {
                    if let (Some(_), Some(sign)) = (&oracle, sign) {
                        hit = first_return(sys, x, j, sign, CHASE_LIMIT)?.map(Element::Int);
                    }
                }
                match hit {
                    Some(c) => hits.push((j, ci, c)),
                    None if oracle.is_some() && sign.is_some() => {}
                    None => {
                        return Ok(Verdict::unknown(
                            budget,
                            format!("cone {ci} has no return to the level-{j} cell inside B_{radius}"),
                        ))
                    }
                }
                exact &= oracle.is_some() && sign.is_some();
            }
        }
        return Ok(Verdict::new(Outcome::True, exact, Witness::ConeReturns(hits), budget)
            .with_note(skipped_note));
    }
    let oracle = sys.exact_returns(x, level);
    if let Some(er) = &oracle {
        if let ExactReturns::Finite { elements } = er {
            if elements.iter().all(|g| *g == group.identity()) {
                return Ok(Verdict::new(Outcome::False, true, Witness::Returns(er.clone()), budget)
                    .with_note("only the identity returns and no cone contains it"));
            }
        }
    }
    let certified = oracle.as_ref().is_some_and(|er| oracle_syndetic(er, group));
    for (ci, cone) in cones.iter().enumerate() {
        let mut hit = None;
        for c in cone {
            if returns_to_cell(sys, x, level, c)? {
                hit = Some(c.clone());
                break;
            }
        }
        match hit {
            Some(c) => hits.push((level, ci, c)),
            // Cones are thick and syndetic sets meet every thick set.
            None if certified => {}
            None => {
                return Ok(Verdict::unknown(budget, format!("cone {ci} misses the level-{level} cell inside B_{radius}")))
            }
        }
    }
    Ok(Verdict::new(Outcome::True, certified, Witness::ConeReturns(hits), budget).with_note(skipped_note))
}

/// Type-I recurrence: the bidirectional criterion on `Z`, cones elsewhere.
pub fn check_recurrence_type1(sys: &dyn Flow, x: &Point, level: usize, radius: u64) -> Result<Verdict> {
    if sys.group().is_integers() {
        return type1_bidirectional(sys, x, level, radius);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let radius = effective_radius(sys.group(), radius);
    let battery = sequence_battery(sys.group(), &SequenceKind::defaults(), radius, &mut rng);
    type1_cones(sys, x, level, radius, &battery)
}

/// Type-II recurrence relative to a battery: one bound `n ≤ R` such that
/// every tail element `g` (`|g| > R`) of every sequence admits
/// `c ∈ K(g)`, `|c| ≤ n`, with `c·x` in the level cell of `x`.
pub fn check_recurrence_type2(
    sys: &dyn Flow,
    x: &Point,
    level: usize,
    radius: u64,
    battery: &[(SequenceKind, Vec<Element>)],
) -> Result<Verdict> {
    sys.check_level(level)?;
    let group = sys.group();
    let radius = effective_radius(group, radius);
    let budget = Budget::at(level, radius);
    if battery.is_empty() {
        if group.is_finite() {
            return Ok(Verdict::new(Outcome::True, true, Witness::None, budget)
                .with_note("finite phase group: no length-divergent sequences"));
        }
        return Err(Error::Empty("type-II battery"));
    }
    let oracle = sys.exact_returns(x, level);
    let certified = oracle.as_ref().is_some_and(|er| oracle_syndetic(er, group));
    let returns = returns_in_ball(sys, x, level, radius)?;
    let mut bound = 0;
    let mut choices = Vec::new();
    for (si, (_, seq)) in battery.iter().enumerate() {
        let tail: Vec<&Element> = seq.iter().filter(|g| group.word_length(g) > radius).collect();
        if tail.is_empty() {
            return Err(Error::Budget(format!("battery sequence {si} never leaves B_{radius}")));
        }
        let mut picks = Vec::new();
        for g in &tail {
            match returns.iter().find(|c| group.in_k_set(c, g, KVariant::Punctured)) {
                Some(c) => {
                    bound = bound.max(group.word_length(c));
                    picks.push(c.clone());
                }
                None => break,
            }
        }
        if picks.len() == tail.len() {
            choices.push(picks);
            continue;
        }
        if certified {
            choices.push(Vec::new());
            continue;
        }
        if let Some(ExactReturns::Finite { elements }) = &oracle {
            let avoids = tail
                .iter()
                .all(|g| elements.iter().all(|r| !group.in_k_set(r, g, KVariant::Punctured)));
            if avoids {
                return Ok(Verdict::new(
                    Outcome::False,
                    true,
                    Witness::AvoidingSequence { sequence: si, returns: elements.clone() },
                    budget,
                )
                .with_note(format!("the tail K-sets of sequence {si} miss the finite return set")));
            }
        }
        return Ok(Verdict::unknown(budget, format!("sequence {si} has tail K-sets without returns in B_{radius}")));
    }
    let v = Verdict::new(Outcome::True, certified, Witness::TypeTwo { bound, choices }, budget);
    if certified && bound == 0 {
        return Ok(v.with_note("syndetic returns; choices lie beyond the window"));
    }
    Ok(v)
}
