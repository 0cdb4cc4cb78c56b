use super::{effective_radius, orbit_pool, PROBE_RADIUS};
use crate::cantor::{separation_level, Point};
use crate::flow::{product, Flow, SharedFlow};
use crate::group::BallVariant;
use crate::verdict::{Budget, Outcome, SeparationProbe, Verdict, Witness};
use crate::Result;

/// Number of probe levels past the target a separation witness must cover.
const PROBE_DEPTH: usize = 3;

/// Most sample points paired up when searching for asymptotic pairs.
const PAIR_SAMPLE: usize = 16;

/// Equicontinuity with target level `k_target`: look for a base point `x`
/// such that, for each probe level `p` above the target, some `y` agreeing
/// with `x` through level `p` has `g·y` and `g·x` apart at level `k_target`.
pub fn check_equicontinuous(sys: &dyn Flow, k_target: usize, radius: u64, sample: &[Point]) -> Result<Verdict> {
    sys.check_level(k_target)?;
    let budget = Budget::at(k_target, radius).with_samples(sample.len());
    if sys.capabilities().level_equivariant {
        return Ok(Verdict::new(Outcome::True, true, Witness::None, budget)
            .with_note("the action permutes the cells of every level"));
    }
    let group = sys.group();
    let r = effective_radius(group, radius.min(PROBE_RADIUS));
    let ball = group.ball(r, BallVariant::Closed)?;
    let pool = orbit_pool(sys, sample, r)?;
    let top = (k_target + PROBE_DEPTH).min(sys.depth());
    let depth = sys.depth();
    for x in sample {
        let mut probes = Vec::new();
        for p in k_target + 1..=top {
            let mut found = None;
            'pool: for y in &pool {
                if y == x || separation_level(sys, x, y, depth)?.value() <= p {
                    continue;
                }
                for g in ball.iter() {
                    let (gx, gy) = (sys.act(g, x)?, sys.act(g, y)?);
                    let image_level = separation_level(sys, &gx, &gy, k_target)?.value();
                    if image_level <= k_target {
                        found = Some(SeparationProbe { y: y.clone(), probe_level: p, g: g.clone(), image_level });
                        break 'pool;
                    }
                }
            }
            match found {
                Some(probe) => probes.push(probe),
                None => break,
            }
        }
        if !probes.is_empty() && probes.len() == top - k_target {
            return Ok(Verdict::new(
                Outcome::False,
                false,
                Witness::Separation { x: x.clone(), target_level: k_target, probes },
                budget,
            ));
        }
    }
    Ok(Verdict::unknown(budget, "no separating probes found for any sampled point"))
}

/// Distality: a pair `x ≠ y` whose translates enter the level-`j` diagonal of
/// the product flow for each `j` up to the target (strictly increasing
/// agreement) is reported as asymptotic, hence proximal.
pub fn check_distal(sys: &SharedFlow, level: usize, radius: u64, sample: &[Point]) -> Result<Verdict> {
    sys.check_level(level)?;
    let budget = Budget::at(level, radius).with_samples(sample.len());
    if sys.capabilities().level_equivariant {
        return Ok(Verdict::new(Outcome::True, true, Witness::None, budget)
            .with_note("level-equivariant: separation levels are preserved by every g"));
    }
    let pf = product(sys.clone());
    let group = sys.group();
    let r = effective_radius(group, radius.min(PROBE_RADIUS));
    let ball = group.ball(r, BallVariant::Closed)?;
    let target = (level.max(1) + PROBE_DEPTH).min(sys.depth());
    let diagonals = (1..=target).map(|j| pf.diagonal(j)).collect::<Result<Vec<_>>>()?;
    let mut pairs = sys.probe_pairs();
    let head = &sample[..sample.len().min(PAIR_SAMPLE)];
    for x in head {
        for y in head {
            if x != y {
                pairs.push((x.clone(), y.clone()));
            }
        }
    }
    for (x, y) in pairs {
        if x == y {
            continue;
        }
        let pair = Point::pair(x.clone(), y.clone());
        let mut steps = Vec::new();
        for (j, diag) in (1..=target).zip(&diagonals) {
            let mut hit = None;
            for g in ball.iter() {
                if diag.contains(&pf, &pf.act(g, &pair)?)? {
                    hit = Some(g.clone());
                    break;
                }
            }
            match hit {
                Some(g) => steps.push((g, j)),
                None => break,
            }
        }
        if steps.len() == target {
            return Ok(Verdict::new(Outcome::False, false, Witness::Asymptotic { x, y, steps }, budget)
                .with_note("translates of the pair enter ever finer diagonal neighborhoods"));
        }
    }
    Ok(Verdict::unknown(budget, "no asymptotic pair found"))
}
