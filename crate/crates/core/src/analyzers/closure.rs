use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use super::{effective_radius, orbit_pool, PROBE_RADIUS};
use crate::cantor::{separation_level, CellKey, ClopenSet, Point};
use crate::flow::{orbit_closure_cells, Flow};
use crate::group::BallVariant;
use crate::verdict::{Budget, Outcome, RoWitness, Verdict, Witness};
use crate::Result;

/// Orbits of a finite system in order of their first point, by breadth-first
/// search along `Γ`.
pub fn finite_orbits(sys: &dyn Flow) -> Result<Option<Vec<Vec<Point>>>> {
    let Some(points) = sys.all_points() else {
        return Ok(None);
    };
    let mut seen = HashSet::new();
    let mut orbits = Vec::new();
    for p in &points {
        if !seen.insert(p.clone()) {
            continue;
        }
        let mut orbit = vec![p.clone()];
        let mut head = 0;
        while head < orbit.len() {
            let y = orbit[head].clone();
            head += 1;
            for s in sys.group().gamma() {
                let z = sys.act(s, &y)?;
                if seen.insert(z.clone()) {
                    orbit.push(z);
                }
            }
        }
        orbits.push(orbit);
    }
    Ok(Some(orbits))
}

/// Closure cells of `x`: exact when the system has an oracle, otherwise the
/// cells met by the ball-`radius` orbit. The flag tells which.
fn closure_or_sample(sys: &dyn Flow, x: &Point, level: usize, radius: u64) -> Result<(BTreeSet<CellKey>, bool)> {
    if let Some(cells) = sys.exact_closure_cells(x, level) {
        return Ok((cells, true));
    }
    let r = effective_radius(sys.group(), radius.min(PROBE_RADIUS));
    Ok((orbit_closure_cells(sys, x, level, r)?.cells, false))
}

/// Is `X` a union of minimal sets?
pub fn check_minimal_decomposition(
    sys: &dyn Flow,
    level: usize,
    radius: u64,
    sample: &[Point],
) -> Result<Verdict> {
    sys.check_level(level)?;
    let budget = Budget::at(level, radius).with_samples(sample.len());
    if let Some(orbits) = finite_orbits(sys)? {
        return Ok(Verdict::new(Outcome::True, true, Witness::Decomposition(orbits), budget)
            .with_note("orbits of a finite action are minimal"));
    }
    if sys.is_minimal() == Some(true) {
        return Ok(Verdict::new(Outcome::True, true, Witness::Decomposition(vec![sample.to_vec()]), budget)
            .with_note("the whole space is minimal"));
    }
    for x in sample {
        for y in sample {
            if x == y || sys.closure_contains(x, y) != Some(true) {
                continue;
            }
            for l in 1..=level.max(1).min(sys.depth()) {
                let (Some(cx), Some(cy)) = (sys.exact_closure_cells(x, l), sys.exact_closure_cells(y, l)) else {
                    break;
                };
                if cy.is_subset(&cx) && cy != cx {
                    return Ok(Verdict::new(
                        Outcome::False,
                        true,
                        Witness::StrictClosure { x: x.clone(), y: y.clone(), level: l },
                        budget,
                    )
                    .with_note("the orbit closure of x contains a strictly smaller closed invariant set"));
                }
            }
        }
    }
    let mut classes: Vec<(BTreeSet<CellKey>, Vec<Point>)> = Vec::new();
    for x in sample {
        let (cells, _) = closure_or_sample(sys, x, level, radius)?;
        match classes.iter_mut().find(|(c, _)| *c == cells) {
            Some((_, pts)) => pts.push(x.clone()),
            None => classes.push((cells, vec![x.clone()])),
        }
    }
    let nested = classes.iter().any(|(a, _)| classes.iter().any(|(b, _)| a != b && b.is_subset(a)));
    if nested {
        return Ok(Verdict::unknown(budget, "sampled closure classes are nested"));
    }
    Ok(Verdict::new(
        Outcome::True,
        false,
        Witness::Decomposition(classes.into_iter().map(|(_, p)| p).collect()),
        budget,
    )
    .with_note("sampled closure classes are pairwise incomparable"))
}

/// Is the orbit closure relation `R_o` closed in `X × X`?
pub fn check_ro_closed(sys: &dyn Flow, level: usize, radius: u64, sample: &[Point]) -> Result<Verdict> {
    sys.check_level(level)?;
    let budget = Budget::at(level, radius).with_samples(sample.len());
    if sys.all_points().is_some() {
        return Ok(Verdict::new(Outcome::True, true, Witness::None, budget)
            .with_note("finite spaces are discrete, so every relation is closed"));
    }
    if sys.is_minimal() == Some(true) {
        return Ok(Verdict::new(Outcome::True, true, Witness::None, budget)
            .with_note("minimal system: R_o is all of X × X"));
    }
    let group = sys.group();
    let r = effective_radius(group, radius.min(PROBE_RADIUS));
    let ball = group.ball(r, BallVariant::Closed)?;
    let target = (level.max(1) + 3).min(sys.depth());
    for x in sample {
        for y in sample {
            if sys.closure_contains(x, y) != Some(false) {
                continue;
            }
            let Some(outside) = outside_cell(sys, x, y)? else {
                continue;
            };
            for z in sample {
                if sys.closure_contains(z, y) != Some(true) {
                    continue;
                }
                let mut sequence = Vec::new();
                for j in 1..=target {
                    let mut step = None;
                    for g in ball.iter() {
                        let xn = sys.act(g, z)?;
                        let agree = separation_level(sys, &xn, x, sys.depth())?.value();
                        if agree > j {
                            step = Some((xn, agree - 1));
                            break;
                        }
                    }
                    match step {
                        Some((xn, agree)) => sequence.push((xn, y.clone(), agree)),
                        None => break,
                    }
                }
                if sequence.len() == target {
                    let (level, outside_cell) = outside;
                    return Ok(Verdict::new(
                        Outcome::False,
                        true,
                        Witness::Ro(Box::new(RoWitness {
                            sequence,
                            limit: (x.clone(), y.clone()),
                            level,
                            outside_cell,
                        })),
                        budget,
                    ));
                }
            }
        }
    }
    Ok(Verdict::unknown(budget, "no converging R_o sequence with a limit outside R_o was found"))
}

/// First level at which `y`'s cell is missing from the exact closure cells
/// of `x`.
fn outside_cell(sys: &dyn Flow, x: &Point, y: &Point) -> Result<Option<(usize, CellKey)>> {
    for l in 1..=sys.depth() {
        let Some(cells) = sys.exact_closure_cells(x, l) else {
            return Ok(None);
        };
        let key = sys.cell_of(y, l)?.key;
        if !cells.contains(&key) {
            return Ok(Some((l, key)));
        }
    }
    Ok(None)
}

/// Exhaustive check on a finite system of both sides of the equivalence
/// between closedness of `R_o` and continuity of `x ↦ cl(Gx)`, computed from
/// the cell structure at levels 1 and 2. Returns `(R_o closed, continuous)`.
pub fn check_continuity_finite(sys: &dyn Flow) -> Result<Option<(bool, bool)>> {
    let Some(orbits) = finite_orbits(sys)? else {
        return Ok(None);
    };
    let points: Vec<Point> = orbits.iter().flatten().cloned().collect();
    let class: HashMap<&Point, usize> =
        orbits.iter().enumerate().flat_map(|(i, o)| o.iter().map(move |p| (p, i))).collect();
    let mut closed = true;
    let mut continuous = true;
    for level in 1..=sys.depth().min(2) {
        let cell: HashMap<&Point, CellKey> = points
            .iter()
            .map(|p| Ok((p, sys.cell_of(p, level)?.key)))
            .collect::<Result<_>>()?;
        // Continuity: points sharing a cell with x have the same orbit closure.
        for x in &points {
            for y in &points {
                if cell[x] == cell[y] && class[x] != class[y] {
                    continuous = false;
                }
            }
        }
        // Closedness: a pair of cells holding a pair of R_o holds only pairs of R_o.
        let related: HashSet<(CellKey, CellKey)> = points
            .iter()
            .flat_map(|x| points.iter().map(move |y| (x, y)))
            .filter(|(x, y)| class[x] == class[y])
            .map(|(x, y)| (cell[x].clone(), cell[y].clone()))
            .collect();
        for x in &points {
            for y in &points {
                if related.contains(&(cell[x].clone(), cell[y].clone())) && class[x] != class[y] {
                    closed = false;
                }
            }
        }
    }
    Ok(Some((closed, continuous)))
}

/// Is `x ↦ cl(Gx)` upper semicontinuous at `x`?
///
/// `V` is the union of the level cells met by `cl(Gx)`. The map fails at `x`
/// when every cell of `x` holds some `y` whose orbit leaves `V`.
pub fn check_orbit_map_usc(
    sys: &dyn Flow,
    x: &Point,
    level: usize,
    radius: u64,
    sample: &[Point],
) -> Result<Verdict> {
    sys.check_level(level)?;
    let budget = Budget::at(level, radius).with_samples(sample.len());
    let group = sys.group();
    if let Some(orbits) = finite_orbits(sys)? {
        let orbit = orbits.iter().find(|o| o.contains(x)).cloned().unwrap_or_default();
        let v: BTreeSet<CellKey> =
            orbit.iter().map(|p| Ok(sys.cell_of(p, 1)?.key)).collect::<Result<_>>()?;
        // The level-1 cell of x is {x}, whose orbit is inside V.
        return Ok(Verdict::new(Outcome::True, true, Witness::Cells(v.into_iter().collect()), budget)
            .with_note("finite space: the level-1 cell of x is a singleton"));
    }
    let level = level.max(1);
    let (v, exact) = closure_or_sample(sys, x, level, radius)?;
    let all: BTreeSet<CellKey> = sys.cells(level)?.into_iter().map(|c| c.key).collect();
    if v == all {
        return Ok(Verdict::new(Outcome::True, exact, Witness::Cells(v.into_iter().collect()), budget)
            .with_note("V is the whole space"));
    }
    let r = effective_radius(group, radius.min(PROBE_RADIUS));
    let ball = group.ball(r, BallVariant::Closed)?;
    let pool = orbit_pool(sys, sample, r)?;
    let mut probes = Vec::new();
    for k in level..=sys.depth() {
        let home = sys.cell_of(x, k)?;
        let mut escape = None;
        'pool: for y in &pool {
            if y == x || sys.cell_of(y, k)? != home {
                continue;
            }
            for g in ball.iter() {
                if !v.contains(&sys.cell_of(&sys.act(g, y)?, level)?.key) {
                    escape = Some((y.clone(), k, g.clone()));
                    break 'pool;
                }
            }
        }
        match escape {
            Some(p) => probes.push(p),
            None => {
                return Ok(Verdict::new(Outcome::True, false, Witness::Cells(v.into_iter().collect()), budget)
                    .with_note(format!("no sampled point of the level-{k} cell of x leaves V")));
            }
        }
    }
    Ok(Verdict::new(Outcome::False, exact, Witness::Escape { x: x.clone(), probes }, budget)
        .with_note("every supported cell of x holds a point whose orbit leaves V"))
}

/// The largest invariant subset `U*` of a clopen `U`, with an openness verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UStar {
    pub target: ClopenSet,
    /// Points found in `U*` (all of them for finite systems).
    pub members: Vec<Point>,
    /// `U*` as a clopen set, when it is known to be one.
    pub set: Option<ClopenSet>,
    pub openness: Verdict,
    /// The criterion "no orbit closure of an outside point meets `U*`",
    /// evaluated independently of `openness`.
    pub dichotomy: Option<bool>,
}

pub fn compute_u_star(sys: &dyn Flow, u: &ClopenSet, radius: u64, sample: &[Point]) -> Result<UStar> {
    let u = u.normalize(sys)?;
    let budget = Budget::at(u.level, radius).with_samples(sample.len());
    let group = sys.group();
    if let Some(points) = sys.all_points() {
        let mut current: HashSet<Point> = HashSet::new();
        for p in &points {
            if u.contains(sys, p)? {
                current.insert(p.clone());
            }
        }
        loop {
            let mut escaped = Vec::new();
            for p in &current {
                for s in group.gamma() {
                    if !current.contains(&sys.act(s, p)?) {
                        escaped.push(p.clone());
                        break;
                    }
                }
            }
            if escaped.is_empty() {
                break;
            }
            for p in escaped {
                current.remove(&p);
            }
        }
        let members: Vec<Point> = points.iter().filter(|p| current.contains(*p)).cloned().collect();
        let keys: Vec<CellKey> =
            members.iter().map(|p| Ok(sys.cell_of(p, 1)?.key)).collect::<Result<_>>()?;
        let set = ClopenSet::from_cells(sys, 1, keys)?;
        let outside: Vec<&Point> = points.iter().filter(|p| !current.contains(*p)).collect();
        let meets = outside
            .iter()
            .any(|y| members.iter().any(|m| sys.closure_contains(y, m) == Some(true)));
        return Ok(UStar {
            target: u,
            members: members.clone(),
            set: Some(set),
            openness: Verdict::new(Outcome::True, true, Witness::Points(members), budget)
                .with_note("finite spaces are discrete"),
            dichotomy: Some(!meets),
        });
    }
    if u.is_full(sys)? {
        return Ok(UStar {
            target: u,
            members: sample.to_vec(),
            set: Some(ClopenSet::full()),
            openness: Verdict::new(Outcome::True, true, Witness::None, budget).with_note("U is the whole space"),
            dichotomy: Some(true),
        });
    }
    if sys.is_minimal() == Some(true) {
        return Ok(UStar {
            target: u,
            members: Vec::new(),
            set: Some(ClopenSet::empty()),
            openness: Verdict::new(Outcome::True, true, Witness::None, budget)
                .with_note("minimal system: every orbit is dense, so U* is empty"),
            dichotomy: Some(true),
        });
    }
    let r = effective_radius(group, radius.min(PROBE_RADIUS));
    let pool = orbit_pool(sys, sample, r)?;
    let level = u.level;
    let exact = pool.iter().all(|p| sys.exact_closure_cells(p, level).is_some());
    if !exact {
        let ball = group.ball(r, BallVariant::Closed)?;
        let mut members = Vec::new();
        for p in &pool {
            let mut inside = true;
            for g in ball.iter() {
                if !u.contains(sys, &sys.act(g, p)?)? {
                    inside = false;
                    break;
                }
            }
            if inside {
                members.push(p.clone());
            }
        }
        return Ok(UStar {
            target: u,
            members,
            set: None,
            openness: Verdict::unknown(budget, "no exact closure oracle"),
            dichotomy: None,
        });
    }
    let member = |p: &Point| -> bool {
        sys.exact_closure_cells(p, level).is_some_and(|c| c.iter().all(|k| u.cells.contains(k)))
    };
    let members: Vec<Point> = pool.iter().filter(|p| member(p)).cloned().collect();
    let outside: Vec<&Point> = pool.iter().filter(|p| !member(p)).collect();
    let meets = outside
        .iter()
        .any(|y| members.iter().any(|m| sys.closure_contains(y, m) == Some(true)));
    let ball = group.ball(r, BallVariant::Closed)?;
    let mut openness = None;
    'members: for m in &members {
        let mut probes = Vec::new();
        for k in level.max(1)..=sys.depth() {
            let home = sys.cell_of(m, k)?;
            let mut escape = None;
            for y in &outside {
                if sys.cell_of(y, k)? != home {
                    continue;
                }
                for g in ball.iter() {
                    if !u.contains(sys, &sys.act(g, y)?)? {
                        escape = Some(((*y).clone(), k, g.clone()));
                        break;
                    }
                }
                if escape.is_some() {
                    break;
                }
            }
            match escape {
                Some(p) => probes.push(p),
                None => continue 'members,
            }
        }
        openness = Some(
            Verdict::new(Outcome::False, true, Witness::Escape { x: m.clone(), probes }, budget)
                .with_note("every supported cell of a point of U* holds a point outside U*"),
        );
        break;
    }
    let openness = openness.unwrap_or_else(|| {
        Verdict::new(Outcome::True, false, Witness::Points(members.clone()), budget)
            .with_note("each sampled point of U* has a cell free of sampled outside points")
    });
    Ok(UStar { target: u, members, set: None, openness, dichotomy: Some(!meets) })
}
