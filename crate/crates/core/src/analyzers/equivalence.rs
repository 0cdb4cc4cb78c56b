use serde::Serialize;

use super::{
    check_ap, check_continuity_finite, check_distal, check_equicontinuous, check_locally_weakly_ap,
    check_minimal_decomposition, check_orbit_map_usc, check_recurrence_type1, check_recurrence_type2,
    check_regularly_ap, check_ro_closed, clopen_battery, compute_u_star, effective_radius, point_pool,
    sequence_battery, type1_cones, AnalysisBudget, Condition,
};
use crate::cantor::Point;
use crate::flow::{Flow, SharedFlow};
use crate::verdict::{Budget, Outcome, Verdict, Witness};
use crate::Result;

/// Pointwise verdicts at one sampled point.
#[derive(Clone, Debug, Serialize)]
pub struct PointRecord {
    pub point: Point,
    pub type_one: Verdict,
    /// The cone-based type-I path, run on `Z`-systems for comparison.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub type_one_cones: Option<Verdict>,
    pub type_two: Verdict,
    pub ap: Verdict,
    pub usc: Verdict,
    pub regularly_ap: Verdict,
}

/// A broken implication or equivalence, with the verdicts involved.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub rule: String,
    pub detail: String,
    pub witnesses: Vec<Verdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionVerdict {
    pub condition: Condition,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub system: String,
    pub budget: Budget,
    pub conditions: Vec<ConditionVerdict>,
    pub equicontinuous: Verdict,
    pub distal: Verdict,
    pub points: Vec<PointRecord>,
    pub consistent: bool,
    pub violations: Vec<Violation>,
    pub trace: Vec<String>,
}

impl EquivalenceReport {
    pub fn verdict(&self, condition: Condition) -> &Verdict {
        &self.conditions[condition as usize].verdict
    }
}

/// System-level verdict of a pointwise property: the first `False` point
/// decides, `True` needs every point.
fn aggregate(points: &[Point], verdicts: &[Verdict], budget: Budget) -> Verdict {
    if let Some(i) = verdicts.iter().position(|v| v.is_false()) {
        let v = &verdicts[i];
        return v.clone().with_note(format!("fails at {}: {}", points[i], v.note));
    }
    if !verdicts.is_empty() && verdicts.iter().all(|v| v.is_true()) {
        let exact = verdicts.iter().all(|v| v.exact);
        return Verdict::new(Outcome::True, exact, Witness::Points(points.to_vec()), budget)
            .with_note("holds at every sampled point");
    }
    Verdict::unknown(budget, "some sampled point is undecided")
}

pub fn cross_check_equivalences(sys: &SharedFlow, budget: &AnalysisBudget) -> Result<EquivalenceReport> {
    cross_check_with(sys, budget, &|_, v| v)
}

/// Runs every condition, passes each system-level verdict through `hook`
/// (identity in normal runs) and checks the implications between them.
pub fn cross_check_with(
    sys: &SharedFlow,
    budget: &AnalysisBudget,
    hook: &dyn Fn(Condition, Verdict) -> Verdict,
) -> Result<EquivalenceReport> {
    let flow: &dyn Flow = sys.as_ref();
    let group = flow.group();
    let k = budget.level.min(flow.depth());
    let r = effective_radius(group, budget.radius);
    let pool = point_pool(flow, budget.samples, budget.seed);
    let used = Budget::at(k, r).with_samples(pool.len());
    let mut rng = budget.rng();
    let battery = sequence_battery(group, &budget.sequences, r, &mut rng);
    let exact_z = group.is_integers() && flow.capabilities().exact_return_sets;

    let mut points = Vec::new();
    for x in &pool {
        let type_one_cones = if exact_z {
            Some(type1_cones(flow, x, k, r, &battery)?)
        } else {
            None
        };
        points.push(PointRecord {
            point: x.clone(),
            type_one: check_recurrence_type1(flow, x, k, r)?,
            type_one_cones,
            type_two: check_recurrence_type2(flow, x, k, r, &battery)?,
            ap: check_ap(flow, x, k, r)?,
            usc: check_orbit_map_usc(flow, x, k, r, &pool)?,
            regularly_ap: check_regularly_ap(flow, x, k, r)?,
        });
    }
    let column = |f: fn(&PointRecord) -> &Verdict| -> Vec<Verdict> { points.iter().map(|p| f(p).clone()).collect() };

    let mut violations = Vec::new();
    let mut trace = Vec::new();

    let ro = check_ro_closed(flow, k, r, &pool)?;
    let mut continuity = ro.clone().with_note("derived from the closedness of R_o");
    if let Some((closed, continuous)) = check_continuity_finite(flow)? {
        trace.push(format!("finite audit: R_o closed = {closed}, orbit map continuous = {continuous}"));
        let outcome = if continuous { Outcome::True } else { Outcome::False };
        continuity = Verdict::new(outcome, true, Witness::None, used)
            .with_note("exhaustive over the cells of levels 1 and 2");
        if closed != continuous || (ro.outcome != outcome && ro.outcome.is_certified()) {
            violations.push(Violation {
                rule: "R_o closed iff the orbit map is continuous".into(),
                detail: format!("exhaustive: closed = {closed}, continuous = {continuous}; analyzer: {}", ro.outcome),
                witnesses: vec![ro.clone(), continuity.clone()],
            });
        }
    }

    let mut core_verdicts = Vec::new();
    let mut clopens = clopen_battery(flow, &mut rng)?;
    clopens.extend(budget.clopens.iter().cloned());
    for u in &clopens {
        let core = compute_u_star(flow, u, r, &pool)?;
        if let Some(d) = core.dichotomy {
            if core.openness.outcome.is_certified() && core.openness.is_true() != d {
                violations.push(Violation {
                    rule: "U* open iff no outside orbit closure meets it".into(),
                    detail: format!("U = {}: openness {}, criterion {d}", u.describe(flow), core.openness.outcome),
                    witnesses: vec![core.openness.clone()],
                });
            }
        }
        core_verdicts.push(core.openness);
    }
    let core = match core_verdicts.iter().position(|v| v.is_false()) {
        Some(i) => {
            let u = &clopens[i];
            let v = core_verdicts[i].clone();
            let note = format!("U = {}: {}", u.describe(flow), v.note);
            v.with_note(note)
        }
        None if core_verdicts.iter().all(|v| v.is_true()) => {
            let exact = core_verdicts.iter().all(|v| v.exact);
            Verdict::new(Outcome::True, exact, Witness::None, used)
                .with_note(format!("U* open for all {} battery sets", clopens.len()))
        }
        None => Verdict::unknown(used, "some battery set is undecided"),
    };

    let raw = [
        (Condition::TypeOne, aggregate(&pool, &column(|p| &p.type_one), used)),
        (Condition::TypeTwo, aggregate(&pool, &column(|p| &p.type_two), used)),
        (Condition::PointwiseAp, aggregate(&pool, &column(|p| &p.ap), used)),
        (Condition::MinimalUnion, check_minimal_decomposition(flow, k, r, &pool)?),
        (Condition::OrbitRelationClosed, ro),
        (Condition::OrbitMapContinuous, continuity),
        (Condition::OrbitMapUsc, aggregate(&pool, &column(|p| &p.usc), used)),
        (Condition::InvariantCoreOpen, core),
        (Condition::LocallyWeaklyAp, check_locally_weakly_ap(flow, k, r, &pool)?),
    ];
    let conditions: Vec<ConditionVerdict> = raw
        .into_iter()
        .map(|(condition, v)| ConditionVerdict { condition, verdict: hook(condition, v) })
        .collect();
    for c in &conditions {
        let v = &c.verdict;
        trace.push(format!(
            "{}: {}{}{}",
            c.condition,
            v.outcome,
            if v.exact { " (exact)" } else { "" },
            if v.note.is_empty() { String::new() } else { format!(" - {}", v.note) }
        ));
    }

    let trues: Vec<&ConditionVerdict> = conditions.iter().filter(|c| c.verdict.is_true()).collect();
    let falses: Vec<&ConditionVerdict> = conditions.iter().filter(|c| c.verdict.is_false()).collect();
    if let (Some(t), Some(f)) = (trues.first(), falses.first()) {
        violations.push(Violation {
            rule: "conditions (1)-(9) are pairwise equivalent".into(),
            detail: format!("{} is true but {} is false", t.condition, f.condition),
            witnesses: vec![t.verdict.clone(), f.verdict.clone()],
        });
    }

    for p in &points {
        if p.ap.is_true() && p.type_two.is_false() {
            violations.push(Violation {
                rule: "almost periodic implies type-II recurrent".into(),
                detail: format!("at {}", p.point),
                witnesses: vec![p.ap.clone(), p.type_two.clone()],
            });
        }
        if p.type_two.is_true() && p.type_one.is_false() {
            violations.push(Violation {
                rule: "type-II recurrent implies type-I recurrent".into(),
                detail: format!("at {}", p.point),
                witnesses: vec![p.type_two.clone(), p.type_one.clone()],
            });
        }
        if let Some(cones) = &p.type_one_cones {
            let both_certified = cones.outcome.is_certified() && p.type_one.outcome.is_certified();
            if both_certified && (cones.outcome != p.type_one.outcome) {
                violations.push(Violation {
                    rule: "cone and bidirectional type-I criteria agree on Z".into(),
                    detail: format!("at {}: cones {}, bidirectional {}", p.point, cones.outcome, p.type_one.outcome),
                    witnesses: vec![cones.clone(), p.type_one.clone()],
                });
            }
        }
    }

    let equicontinuous = check_equicontinuous(flow, k, r, &pool)?;
    let distal = check_distal(sys, k, r, &pool)?;
    trace.push(format!("equicontinuous: {}{}", equicontinuous.outcome, if equicontinuous.exact { " (exact)" } else { "" }));
    trace.push(format!("distal: {}{}", distal.outcome, if distal.exact { " (exact)" } else { "" }));
    if equicontinuous.is_false() && distal.is_true() {
        violations.push(Violation {
            rule: "distal implies equicontinuous".into(),
            detail: "equicontinuity refuted while distality is certified".into(),
            witnesses: vec![equicontinuous.clone(), distal.clone()],
        });
    }

    let consistent = violations.is_empty();
    trace.push(format!("consistent: {consistent}"));
    Ok(EquivalenceReport {
        system: flow.name(),
        budget: used,
        conditions,
        equicontinuous,
        distal,
        points,
        consistent,
        violations,
        trace,
    })
}

