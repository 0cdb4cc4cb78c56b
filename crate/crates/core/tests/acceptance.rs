//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Tolerances are exact unless a line says
//! otherwise.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recurrence::analyzers::replay::replay;
use recurrence::analyzers::{
    check_continuity_finite, check_distal, check_equicontinuous, check_regularly_ap, cross_check_equivalences,
    point_pool, quotient_by_orbit_closure, sequence_battery, type1_bidirectional, type1_cones, AnalysisBudget,
    Condition, EquivalenceReport, SequenceKind,
};
use recurrence::cantor::{ClopenSet, Point};
use recurrence::flow::{
    build_odometer, build_one_dot_subshift, build_substitution_subshift, random_finite_action, return_times, Flow,
    SharedFlow,
};
use recurrence::group::{is_thick_window, embedding_witness, BallVariant, Element, Group, KVariant};
use recurrence::oracle;
use recurrence::verdict::{SubgroupWitness, Witness};

/// Wall-clock limit for the consistency sweep.
const SWEEP_LIMIT: Duration = Duration::from_secs(300);

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: recurrence::Error) -> String {
    e.to_string()
}

fn thue_morse() -> SharedFlow {
    Arc::new(build_substitution_subshift("thue-morse", vec![vec![0, 1], vec![1, 0]]).unwrap())
}

fn fibonacci() -> SharedFlow {
    Arc::new(build_substitution_subshift("fibonacci", vec![vec![0, 1], vec![0]]).unwrap())
}

fn odometer(b: u64) -> SharedFlow {
    Arc::new(build_odometer(b).unwrap())
}

fn one_dot() -> SharedFlow {
    Arc::new(build_one_dot_subshift())
}

fn random_action(group: Group, size: usize, seed: u64) -> SharedFlow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Arc::new(random_finite_action(group, size, &mut rng).unwrap())
}

fn sweep_systems() -> Vec<SharedFlow> {
    vec![
        odometer(2),
        odometer(3),
        thue_morse(),
        fibonacci(),
        one_dot(),
        random_action(Group::free(2).unwrap(), 12, 1),
        random_action(Group::free(2).unwrap(), 20, 2),
        random_action(Group::free_abelian(2).unwrap(), 16, 3),
        random_action(Group::free_abelian(2).unwrap(), 24, 4),
    ]
}

const SWEEP_BUDGETS: [(usize, u64, usize); 3] = [(1, 64, 6), (3, 512, 8), (4, 4096, 8)];

fn sweep() -> Result<(Vec<EquivalenceReport>, Duration), String> {
    let start = Instant::now();
    let mut reports = Vec::new();
    for sys in sweep_systems() {
        for (i, &(level, radius, samples)) in SWEEP_BUDGETS.iter().enumerate() {
            let budget = AnalysisBudget::new(level, radius, samples, i as u64);
            reports.push(cross_check_equivalences(&sys, &budget).map_err(err)?);
        }
    }
    Ok((reports, start.elapsed()))
}

fn criterion_1(reports: &[EquivalenceReport], elapsed: Duration) -> Check {
    for r in reports {
        ensure(r.consistent, || {
            let v: Vec<String> = r.violations.iter().map(|v| format!("{}: {}", v.rule, v.detail)).collect();
            format!("{} at {:?}: {}", r.system, r.budget, v.join("; "))
        })?;
    }
    ensure(elapsed <= SWEEP_LIMIT, || format!("sweep took {elapsed:.1?} > {SWEEP_LIMIT:?}"))?;
    Ok(format!("{} runs consistent in {elapsed:.1?} (limit {SWEEP_LIMIT:?})", reports.len()))
}

fn criterion_4(reports: &[EquivalenceReport]) -> Check {
    let mut triples = 0;
    for r in reports {
        for p in &r.points {
            triples += 1;
            ensure(!(p.ap.is_true() && p.type_two.is_false()), || format!("{} at {}: a.p. but not type II", r.system, p.point))?;
            ensure(!(p.type_two.is_true() && p.type_one.is_false()), || {
                format!("{} at {}: type II but not type I", r.system, p.point)
            })?;
        }
    }
    Ok(format!("{triples} (system, point, budget) triples respect a.p. => II => I"))
}

fn criterion_2() -> Check {
    let sys = one_dot();
    let flow: &dyn Flow = sys.as_ref();
    let report = cross_check_equivalences(&sys, &AnalysisBudget::new(2, 128, 8, 0)).map_err(err)?;
    ensure(report.consistent, || "one-dot report is inconsistent".into())?;
    let pointwise = |c: Condition, p: &recurrence::analyzers::PointRecord| match c {
        Condition::TypeOne => Some(p.type_one.clone()),
        Condition::PointwiseAp => Some(p.ap.clone()),
        Condition::OrbitMapUsc => Some(p.usc.clone()),
        _ => None,
    };
    let wanted = [
        Condition::TypeOne,
        Condition::PointwiseAp,
        Condition::MinimalUnion,
        Condition::OrbitRelationClosed,
        Condition::OrbitMapUsc,
        Condition::InvariantCoreOpen,
    ];
    for c in wanted {
        let v = report.verdict(c);
        ensure(v.is_false() && v.exact, || format!("{c} is {} (exact = {})", v.outcome, v.exact))?;
        // Pointwise conditions replay at the first failing point.
        let at = report.points.iter().find_map(|p| pointwise(c, p).filter(|v| v.is_false()).map(|v| (p.point.clone(), v)));
        let ok = match at {
            Some((x, pv)) => replay(flow, Some(&x), &pv).map_err(err)?,
            None => replay(flow, None, v).map_err(err)?,
        };
        ensure(ok, || format!("{c}: witness does not replay"))?;
    }
    for c in Condition::ALL {
        ensure(!report.verdict(c).is_true(), || format!("{c} certified true on one-dot"))?;
    }
    let Witness::Ro(w) = &report.verdict(Condition::OrbitRelationClosed).witness else {
        return Err("condition (5) lacks an R_o witness".into());
    };
    let mark = Point::Mark { position: 0 };
    ensure(w.limit == (Point::Zero, mark.clone()), || format!("R_o limit is {:?}", w.limit))?;
    for (xn, yn, _) in &w.sequence {
        ensure(*yn == mark, || format!("y_n = {yn} is not x"))?;
        let mut is_shift = false;
        for n in -4096i64..=4096 {
            if flow.act(&Element::Int(n), &mark).map_err(err)? == *xn {
                is_shift = true;
                break;
            }
        }
        ensure(is_shift, || format!("x_n = {xn} is not a translate of x"))?;
    }
    ensure(flow.closure_contains(&Point::Zero, &mark) == Some(false), || "x lies in cl(G zero)".into())?;
    Ok(format!("(1)(3)(4)(5)(7)(8) false exact and replayed; R_o witness has {} terms", w.sequence.len()))
}

fn criterion_3() -> Check {
    let mut checked = 0;
    for b in [2u64, 3] {
        let sys = odometer(b);
        let flow: &dyn Flow = sys.as_ref();
        let pool = point_pool(flow, 4, b);
        for k in 1..=6usize {
            let m = b.pow(k as u32) as i64;
            let radius = 3 * m as u64;
            for x in &pool {
                let cell = ClopenSet::cylinder(flow.cell_of(x, k).map_err(err)?);
                let rs = return_times(flow, x, &cell, radius).map_err(err)?;
                let got: BTreeSet<i64> = rs.elements.iter().filter_map(Element::as_int).collect();
                let want: BTreeSet<i64> = (-3..=3).map(|j| j * m).collect();
                ensure(rs.exact && got == want, || format!("b={b}, k={k}, x={x}: returns {got:?}"))?;
                let rap = check_regularly_ap(flow, x, k, radius).map_err(err)?;
                let subgroup = matches!(rap.witness,
                    Witness::Subgroup(SubgroupWitness::Multiples { modulus }) if modulus == m as u64);
                ensure(rap.is_true() && rap.exact && subgroup, || {
                    format!("b={b}, k={k}: regularly a.p. is {} with {:?}", rap.outcome, rap.witness)
                })?;
                checked += 1;
            }
            let eq = check_equicontinuous(flow, k, radius, &pool).map_err(err)?;
            ensure(eq.is_true() && eq.exact, || format!("b={b}, k={k}: equicontinuity {}", eq.outcome))?;
        }
    }
    Ok(format!("{checked} (base, level, point) return sets equal b^k Z in B_3b^k; subgroup witnesses b^k Z"))
}

fn criterion_5() -> Check {
    let systems = vec![
        odometer(2),
        odometer(3),
        one_dot(),
        random_action(Group::integers(), 10, 5),
        random_action(Group::integers(), 17, 6),
        random_action(Group::integers(), 33, 7),
    ];
    let radius = 128;
    let mut points = 0;
    let mut comparisons = 0;
    for sys in &systems {
        let flow: &dyn Flow = sys.as_ref();
        ensure(flow.capabilities().exact_return_sets, || format!("{} lacks exact returns", flow.name()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let battery = sequence_battery(flow.group(), &SequenceKind::defaults(), radius, &mut rng);
        for x in point_pool(flow, 24, 3) {
            points += 1;
            for k in 1..=4.min(flow.depth()) {
                let cones = type1_cones(flow, &x, k, radius, &battery).map_err(err)?;
                let bidi = type1_bidirectional(flow, &x, k, radius).map_err(err)?;
                comparisons += 1;
                ensure(cones.outcome == bidi.outcome, || {
                    format!("{} at {x}, level {k}: cones {}, bidirectional {}", flow.name(), cones.outcome, bidi.outcome)
                })?;
            }
        }
    }
    ensure(points >= 100, || format!("only {points} points sampled"))?;
    Ok(format!("0 disagreements over {points} points ({comparisons} level comparisons)"))
}

fn criterion_6() -> Check {
    let z = Group::integers();
    for r in 1..=32u64 {
        let seq: Vec<Element> = (1..=2 * r as i64 + 8).map(Element::Int).collect();
        let cone = z.cone_approx(&seq, r, KVariant::Punctured).map_err(err)?;
        let want: Vec<Element> = (1..=r as i64).map(Element::Int).collect();
        let lower: BTreeSet<&Element> = cone.lower.iter().collect();
        ensure(cone.stabilized && lower == want.iter().collect(), || format!("g_n = n, R = {r}: lower {:?}", cone.lower))?;
    }
    let mut thick = 0;
    let mut compared = 0;
    for (group, r) in [(Group::integers(), 32u64), (Group::free_abelian(2).unwrap(), 6), (Group::free(2).unwrap(), 4)] {
        let mut rng = ChaCha8Rng::seed_from_u64(r);
        for (kind, seq) in sequence_battery(&group, &SequenceKind::defaults(), r, &mut rng) {
            let punctured = group.cone_approx(&seq, r, KVariant::Punctured).map_err(err)?;
            let closed = group.cone_approx(&seq, r, KVariant::Closed).map_err(err)?;
            compared += 1;
            ensure(
                punctured.lower == closed.lower
                    && punctured.upper == closed.upper
                    && punctured.stabilized == closed.stabilized,
                || format!("{} {kind:?}: closed and punctured cones differ", group.name()),
            )?;
            if !punctured.stabilized {
                continue;
            }
            let lower = punctured.lower.clone();
            let member = move |h: &Element| lower.contains(h);
            for n in (0..).take_while(|n| 2 * n + 1 <= r) {
                let v = is_thick_window(&group, &member, n, r).map_err(err)?;
                thick += 1;
                ensure(v.is_true(), || format!("{} {kind:?}: no thickness witness for n = {n}, R = {r}", group.name()))?;
            }
        }
    }
    Ok(format!("g_n = n stabilizes to {{1..R}} for R <= 32; {thick} thickness witnesses; {compared} battery cones variant-independent"))
}

fn l1(v: &[i64]) -> i64 {
    v.iter().map(|c| c.abs()).sum()
}

fn coords(g: &Element) -> Vec<i64> {
    match g {
        Element::Int(n) => vec![*n],
        Element::Vector(v) => v.clone(),
        _ => unreachable!("lattice elements only"),
    }
}

/// All lattice points of L1 norm exactly `n` in dimension `d`.
fn sphere(d: usize, n: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let side = 2 * n + 1;
    for idx in 0..side.pow(d as u32) {
        let v: Vec<i64> = (0..d).map(|i| (idx / side.pow(i as u32)) % side - n).collect();
        if l1(&v) == n {
            out.push(v);
        }
    }
    out
}

/// Brute force: some `t` with `|t| = n` and `0 < |f + t - g| < |g|` for all `f`.
fn embeds(f: &[Vec<i64>], g: &[i64], n: i64) -> bool {
    sphere(g.len(), n).iter().any(|t| {
        f.iter().all(|fv| {
            let d: Vec<i64> = (0..g.len()).map(|i| fv[i] + t[i] - g[i]).collect();
            let dist = l1(&d);
            dist > 0 && dist < l1(g)
        })
    })
}

fn criterion_7() -> Check {
    const N: i64 = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(1729);
    let mut ns = Vec::new();
    for (group, d) in [(Group::integers(), 1usize), (Group::free_abelian(2).unwrap(), 2)] {
        let ball: Vec<Element> = group.ball(3, BallVariant::Closed).map_err(err)?.iter().cloned().collect();
        for trial in 0..20 {
            let size = rng.gen_range(1..=6);
            let mut f: Vec<Element> = (0..size).map(|_| ball[rng.gen_range(0..ball.len())].clone()).collect();
            f.sort();
            f.dedup();
            let samples: Vec<Element> = (0..12)
                .map(|_| {
                    let len = rng.gen_range(N..=4 * N);
                    if d == 1 {
                        Element::Int(if rng.gen_bool(0.5) { len } else { -len })
                    } else {
                        let a = rng.gen_range(-len..=len);
                        let b = (len - a.abs()) * if rng.gen_bool(0.5) { 1 } else { -1 };
                        Element::Vector(vec![a, b])
                    }
                })
                .collect();
            let w = embedding_witness(&group, &f, (1, N as u64), &samples, KVariant::Punctured).map_err(err)?;
            let n = w.n as i64;
            let fc: Vec<Vec<i64>> = f.iter().map(coords).collect();
            ensure(w.witnesses.len() == samples.len(), || format!("{} trial {trial}: not every sample served", group.name()))?;
            for (g, t) in &w.witnesses {
                let (gc, tc) = (coords(g), coords(t));
                ensure(l1(&gc) >= n && l1(&gc) <= 4 * N && l1(&tc) == n, || format!("trial {trial}: bad lengths"))?;
                let ok = fc.iter().all(|fv| {
                    let dist = l1(&(0..gc.len()).map(|i| fv[i] + tc[i] - gc[i]).collect::<Vec<_>>());
                    dist > 0 && dist < l1(&gc)
                });
                ensure(ok, || format!("{} trial {trial}: F + {t} is not inside K({g})", group.name()))?;
            }
            // The reported n is the least one that works on the samples.
            for smaller in 1..n {
                let all = samples.iter().all(|g| embeds(&fc, &coords(g), smaller));
                ensure(!all, || format!("{} trial {trial}: n = {smaller} already works", group.name()))?;
            }
            ns.push(n);
        }
    }
    let (lo, hi) = (ns.iter().min().copied().unwrap_or(0), ns.iter().max().copied().unwrap_or(0));
    Ok(format!("40 random F in B_3: least n found and brute-force verified (n in {lo}..={hi})"))
}

fn finite_orbits_bfs(flow: &dyn Flow) -> Vec<BTreeSet<Point>> {
    let points = flow.all_points().expect("finite");
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    for p in points {
        if seen.contains(&p) {
            continue;
        }
        let mut orbit = BTreeSet::from([p.clone()]);
        let mut stack = vec![p];
        while let Some(q) = stack.pop() {
            for s in flow.group().generators() {
                for g in [s.clone(), flow.group().invert(s).unwrap()] {
                    let r = flow.act(&g, &q).unwrap();
                    if orbit.insert(r.clone()) {
                        stack.push(r);
                    }
                }
            }
        }
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit);
    }
    orbits
}

fn criterion_8() -> Check {
    let groups = [Group::integers(), Group::free_abelian(2).unwrap(), Group::free(2).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..50u64 {
        let group = groups[i as usize % 3].clone();
        let size = rng.gen_range(1..=64);
        let sys = random_action(group, size, 100 + i);
        let flow: &dyn Flow = sys.as_ref();
        let report = cross_check_equivalences(&sys, &AnalysisBudget::new(2, 16, 8, i)).map_err(err)?;
        for c in Condition::ALL {
            let v = report.verdict(c);
            ensure(v.is_true() && v.exact, || format!("{} #{i}: {c} is {} (exact = {})", flow.name(), v.outcome, v.exact))?;
        }
        let q = quotient_by_orbit_closure(flow).map_err(err)?;
        ensure(q.zero_dimensional && q.trivial_action && q.minimal_fibers, || format!("{} #{i}: quotient clauses fail", flow.name()))?;
        let classes: BTreeSet<BTreeSet<Point>> = q.classes.iter().map(|c| c.iter().cloned().collect()).collect();
        let orbits: BTreeSet<BTreeSet<Point>> = finite_orbits_bfs(flow).into_iter().collect();
        ensure(classes == orbits, || format!("{} #{i}: quotient fibers are not the orbits", flow.name()))?;
        let (closed, continuous) = check_continuity_finite(flow).map_err(err)?.ok_or("no exhaustive audit")?;
        ensure(closed == continuous, || format!("{} #{i}: R_o closed = {closed}, continuity = {continuous}", flow.name()))?;
        let five = report.verdict(Condition::OrbitRelationClosed).is_true();
        ensure(five == closed, || format!("{} #{i}: analyzer and exhaustive audit disagree on R_o", flow.name()))?;
    }
    Ok("50 random actions: nine conditions true exact, quotient clauses 1)-3), R_o closed <=> continuity".into())
}

fn criterion_9() -> Check {
    for sys in [thue_morse(), one_dot()] {
        let flow: &dyn Flow = sys.as_ref();
        let pool = point_pool(flow, 8, 9);
        let eq = check_equicontinuous(flow, 1, 1024, &pool).map_err(err)?;
        ensure(eq.is_false(), || format!("{}: equicontinuity is {}", flow.name(), eq.outcome))?;
        ensure(replay(flow, None, &eq).map_err(err)?, || format!("{}: separation witness does not replay", flow.name()))?;
        for level in 1..=3 {
            let distal = check_distal(&sys, level, 1024, &pool).map_err(err)?;
            ensure(!distal.is_true(), || format!("{}: distal certified at level {level}", flow.name()))?;
            if distal.is_false() {
                ensure(replay(flow, None, &distal).map_err(err)?, || format!("{}: asymptotic pair does not replay", flow.name()))?;
            }
        }
    }
    for b in [2, 3] {
        let sys = odometer(b);
        let pool = point_pool(sys.as_ref(), 8, 9);
        let distal = check_distal(&sys, 3, 256, &pool).map_err(err)?;
        let eq = check_equicontinuous(sys.as_ref(), 3, 256, &pool).map_err(err)?;
        ensure(distal.is_true() && distal.exact && eq.is_true() && eq.exact, || {
            format!("odometer {b}: distal {} equicontinuous {}", distal.outcome, eq.outcome)
        })?;
    }
    Ok("Thue-Morse and one-dot: equicontinuity false (replayed), never distal; odometers distal and equicontinuous exact".into())
}

fn oracle_line(line: &str) -> Result<String, String> {
    let mut parts = line.split_whitespace();
    let sub = parts.next().unwrap();
    let args: Vec<String> = parts.map(String::from).collect();
    oracle::run(sub, &args).map_err(err)
}

/// Library elements in the oracle's display order.
fn render_elements(elements: &[Element]) -> String {
    let mut items: Vec<&Element> = elements.iter().collect();
    items.sort_by_key(|e| match e {
        Element::Word(w) => (w.len(), e.to_string(), Vec::new()),
        _ => (0, String::new(), coords(e)),
    });
    format!("{{{}}}", items.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
}

fn render_returns(elements: &[Element]) -> String {
    let set: BTreeSet<i64> = elements.iter().filter_map(Element::as_int).collect();
    let mags: BTreeSet<i64> = set.iter().map(|t| t.abs()).collect();
    mags.iter()
        .map(|&m| match (m, set.contains(&m), set.contains(&-m)) {
            (0, _, _) => "0".to_string(),
            (_, true, true) => format!("±{m}"),
            (_, true, false) => m.to_string(),
            _ => format!("-{m}"),
        })
        .collect::<Vec<_>>()
        .join(",")
}

fn library_cone(group: &Group, kind: &str, r: u64) -> Result<String, String> {
    let seq: Vec<Element> = (1..=2 * r as i64 + 8)
        .map(|n| {
            let v = match kind {
                "positive" => n,
                "negative" => -n,
                _ => if n % 2 == 0 { n } else { -n },
            };
            if group.is_integers() { Element::Int(v) } else { Element::Vector(vec![v, 0]) }
        })
        .collect();
    let c = group.cone_approx(&seq, r, KVariant::Punctured).map_err(err)?;
    Ok(format!("lower={}\nupper={}\nstabilized={}", render_elements(&c.lower), render_elements(&c.upper), c.stabilized))
}

fn library_returns(sys: &SharedFlow, x: &Point, k: usize, r: u64) -> Result<String, String> {
    let flow: &dyn Flow = sys.as_ref();
    let cell = ClopenSet::cylinder(flow.cell_of(x, k).map_err(err)?);
    Ok(render_returns(&return_times(flow, x, &cell, r).map_err(err)?.elements))
}

fn library_cells(sys: &SharedFlow, x: &Point, k: usize, r: u64) -> Result<String, String> {
    let approx = recurrence::flow::orbit_closure_cells(sys.as_ref(), x, k, r).map_err(err)?;
    Ok(approx.cells.len().to_string())
}

fn criterion_10() -> Check {
    let z = Group::integers();
    let z2 = Group::free_abelian(2).unwrap();
    let f2 = Group::free(2).unwrap();
    let punctured = |g: &Group, r: u64| -> Result<String, String> {
        Ok(g.ball(r, BallVariant::Punctured).map_err(err)?.len().to_string())
    };
    let kset = |g: &Group, x: Element| -> Result<String, String> {
        Ok(render_elements(&g.k_set(&x, KVariant::Punctured).map_err(err)?.elements))
    };
    let zero = Point::adic(0, 1);
    let tm_point = Point::Shift { left: 0, right: 0, offset: 0 };
    let mark = Point::Mark { position: 0 };
    let fib = fibonacci();
    let fib_point = fib.base_points()[0].clone();
    // (oracle command, library value, value stated with the example, if any)
    let cases: Vec<(&str, String, Option<&str>)> = vec![
        ("ball-count Z2 2", punctured(&z2, 2)?, Some("12")),
        ("ball-count F2 2", punctured(&f2, 2)?, Some("16")),
        ("ball-count Z 7", punctured(&z, 7)?, None),
        ("ball-count F2 3", punctured(&f2, 3)?, None),
        ("ball-count S3 1", punctured(&Group::symmetric3(), 1)?, None),
        ("ball-count S3 2", punctured(&Group::symmetric3(), 2)?, None),
        ("ball-count C7 2", punctured(&Group::cyclic(7).unwrap(), 2)?, None),
        ("kset Z 5", kset(&z, Element::Int(5))?, Some("{1,2,3,4,6,7,8,9}")),
        ("kset F2 ab", kset(&f2, f2.word("ab").map_err(err)?)?, Some("{b,Bab,aab,bab}")),
        ("kset Z2 (3,0)", kset(&z2, Element::Vector(vec![3, 0]))?, None),
        ("cone Z alternating 5", library_cone(&z, "alternating", 5)?,
            Some("lower={}\nupper={-5,-4,-3,-2,-1,1,2,3,4,5}\nstabilized=false")),
        ("cone Z2 positive 2", library_cone(&z2, "positive", 2)?, None),
        ("cone Z positive 5", library_cone(&z, "positive", 5)?,
            Some("lower={1,2,3,4,5}\nupper={1,2,3,4,5}\nstabilized=true")),
        ("factor-scan thue-morse 3", library_cells(&thue_morse(), &tm_point, 1, 1024)?, Some("6")),
        ("factor-scan one-dot 3", library_cells(&one_dot(), &mark, 1, 10)?, Some("4")),
        ("factor-scan fibonacci 3", library_cells(&fib, &fib_point, 1, 1024)?, None),
        ("return-scan odometer 3 32", library_returns(&odometer(2), &zero, 3, 32)?, Some("0,±8,±16,±24,±32")),
        ("return-scan odometer 2 10", library_returns(&odometer(2), &zero, 2, 10)?, Some("0,±4,±8")),
        ("return-scan odometer:3 2 40", library_returns(&odometer(3), &zero, 2, 40)?, None),
        ("return-scan one-dot 1 100", library_returns(&one_dot(), &mark, 1, 100)?, Some("0")),
        ("return-scan thue-morse 1 4096", library_returns(&thue_morse(), &tm_point, 1, 4096)?, None),
    ];
    for (cmd, library, stated) in &cases {
        let out = oracle_line(cmd)?;
        ensure(out == *library, || format!("`{cmd}`: oracle {out:?}, library {library:?}"))?;
        if let Some(s) = stated {
            ensure(out == *s, || format!("`{cmd}`: oracle {out:?}, expected {s:?}"))?;
        }
    }
    // The Z² cone lower set, checked against the membership rule t1 >= |t2| + 1.
    let z2_cone = oracle_line("cone Z2 positive 2")?;
    ensure(z2_cone.starts_with("lower={(1,0),(2,0)}"), || format!("Z2 cone: {z2_cone}"))?;
    // Thue-Morse returns to a level-1 cell have gaps of at most 9.
    let tm: Vec<i64> = return_times(thue_morse().as_ref(), &tm_point,
        &ClopenSet::cylinder(thue_morse().cell_of(&tm_point, 1).map_err(err)?), 4096)
        .map_err(err)?.elements.iter().filter_map(Element::as_int).collect();
    let mut sorted = tm.clone();
    sorted.sort_unstable();
    let gap = sorted.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    ensure(gap <= 9, || format!("Thue-Morse return gap {gap}"))?;
    Ok(format!("{} oracle outputs byte-identical to library values", cases.len() + 2))
}

fn main() {
    let mut failed = 0;
    let mut clock = Instant::now();
    let mut report = |n: usize, result: std::thread::Result<Check>| {
        let took = clock.elapsed();
        clock = Instant::now();
        let line = match result {
            Ok(Ok(detail)) => format!("criterion {n:>2}: PASS  {detail} [{took:.1?}]"),
            Ok(Err(e)) => {
                failed += 1;
                format!("criterion {n:>2}: FAIL  {e}")
            }
            Err(_) => {
                failed += 1;
                format!("criterion {n:>2}: FAIL  panicked")
            }
        };
        println!("{line}");
    };
    let swept = catch_unwind(sweep);
    let (reports, elapsed) = match &swept {
        Ok(Ok((r, e))) => (r.clone(), *e),
        _ => (Vec::new(), Duration::ZERO),
    };
    let sweep_error = match &swept {
        Ok(Err(e)) => Some(e.clone()),
        Err(_) => Some("sweep panicked".to_string()),
        _ => None,
    };
    let with_sweep = |f: &dyn Fn() -> Check| match &sweep_error {
        Some(e) => Err(e.clone()),
        None => f(),
    };
    report(1, catch_unwind(AssertUnwindSafe(|| with_sweep(&|| criterion_1(&reports, elapsed)))));
    report(2, catch_unwind(criterion_2));
    report(3, catch_unwind(criterion_3));
    report(4, catch_unwind(AssertUnwindSafe(|| with_sweep(&|| criterion_4(&reports)))));
    report(5, catch_unwind(criterion_5));
    report(6, catch_unwind(criterion_6));
    report(7, catch_unwind(criterion_7));
    report(8, catch_unwind(criterion_8));
    report(9, catch_unwind(criterion_9));
    report(10, catch_unwind(criterion_10));
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
