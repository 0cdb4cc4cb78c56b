use std::sync::Arc;

use recurrence::analyzers::replay::replay;
use recurrence::analyzers::{
    check_ap, check_equicontinuous, check_recurrence_type1, check_regularly_ap, cross_check_equivalences,
    point_pool, quotient_by_orbit_closure, type1_bidirectional, AnalysisBudget, Condition,
};
use recurrence::cantor::Point;
use recurrence::config::catalog;
use recurrence::flow::{build_finite_action, build_odometer, build_one_dot_subshift, Flow, Substitution};
use recurrence::group::Group;
use recurrence::verdict::{Outcome, Witness};

#[test]
fn odometer_points_are_regularly_almost_periodic() {
    let odo = build_odometer(2).unwrap();
    for x in [odo.zero(), Point::adic(1, 3), Point::adic(-5, 1)] {
        let ap = check_ap(&odo, &x, 4, 64).unwrap();
        assert_eq!((ap.outcome, ap.exact), (Outcome::True, true), "{x}");
        let rap = check_regularly_ap(&odo, &x, 4, 64).unwrap();
        assert_eq!(rap.outcome, Outcome::True);
        assert!(matches!(rap.witness, Witness::Subgroup(_)), "{:?}", rap.witness);
        assert!(replay(&odo, Some(&x), &rap).unwrap());
    }
}

#[test]
fn the_marked_point_is_not_recurrent() {
    let dot = build_one_dot_subshift();
    let x = dot.marked();
    let t1 = type1_bidirectional(&dot, &x, 2, 64).unwrap();
    assert_eq!((t1.outcome, t1.exact), (Outcome::False, true));
    assert!(replay(&dot, Some(&x), &t1).unwrap());
    let ap = check_ap(&dot, &x, 2, 64).unwrap();
    assert_eq!((ap.outcome, ap.exact), (Outcome::False, true));
    let zero = check_ap(&dot, &dot.zero(), 2, 64).unwrap();
    assert_eq!(zero.outcome, Outcome::True);
}

#[test]
fn thue_morse_fixed_point_recurs() {
    let tm = Substitution::thue_morse();
    let x = tm.base_points()[0].clone();
    let v = check_recurrence_type1(&tm, &x, 3, 256).unwrap();
    assert_eq!(v.outcome, Outcome::True);
    assert!(replay(&tm, Some(&x), &v).unwrap());
}

#[test]
fn recurrence_on_finite_free_group_actions() {
    let f2 = Group::free(2).unwrap();
    let sys = build_finite_action(f2, vec![vec![1, 2, 0, 3, 4], vec![0, 1, 2, 4, 3]]).unwrap();
    for x in sys.base_points() {
        let v = check_recurrence_type1(&sys, &x, 1, 6).unwrap();
        assert_eq!(v.outcome, Outcome::True, "{x}");
        assert!(replay(&sys, Some(&x), &v).unwrap());
    }
}

#[test]
fn catalog_witnesses_replay() {
    for entry in catalog() {
        let sys = entry.system.build(0).unwrap();
        let budget = AnalysisBudget::new(2, 64, 4, 0);
        let report = cross_check_equivalences(&sys, &budget).unwrap();
        assert!(report.consistent, "{}: {:?}", entry.name, report.violations);
        for rec in &report.points {
            let x = Some(&rec.point);
            for v in [&rec.type_one, &rec.type_two, &rec.ap, &rec.usc, &rec.regularly_ap] {
                if v.outcome != Outcome::Unknown {
                    assert!(replay(sys.as_ref(), x, v).unwrap(), "{} at {}: {v:?}", entry.name, rec.point);
                }
            }
        }
        for c in Condition::ALL {
            let v = report.verdict(c);
            if v.outcome != Outcome::Unknown {
                assert!(replay(sys.as_ref(), None, v).unwrap(), "{} {c}: {v:?}", entry.name);
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let entry = catalog().into_iter().find(|e| e.name == "thue-morse").unwrap();
    let sys = entry.system.build(7).unwrap();
    let budget = AnalysisBudget::new(2, 64, 6, 7);
    let a = serde_json::to_string(&cross_check_equivalences(&sys, &budget).unwrap()).unwrap();
    let b = serde_json::to_string(&cross_check_equivalences(&sys, &budget).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn quotients() {
    let f2 = Group::free(2).unwrap();
    let two_orbits = build_finite_action(f2, vec![vec![1, 2, 0, 4, 3], vec![2, 0, 1, 3, 4]]).unwrap();
    let q = quotient_by_orbit_closure(&two_orbits).unwrap();
    assert_eq!(q.classes.len(), 2);
    assert!(q.verified());
    assert_eq!(q.project(&Point::Finite { index: 0 }), q.project(&Point::Finite { index: 2 }));
    assert_ne!(q.project(&Point::Finite { index: 0 }), q.project(&Point::Finite { index: 3 }));

    let odo = build_odometer(2).unwrap();
    let q = quotient_by_orbit_closure(&odo).unwrap();
    assert_eq!(q.classes.len(), 1);

    assert!(quotient_by_orbit_closure(&build_one_dot_subshift()).is_err());
}

#[test]
fn odometers_are_equicontinuous() {
    let odo: Arc<dyn Flow> = Arc::new(build_odometer(3).unwrap());
    let pool = point_pool(odo.as_ref(), 8, 0);
    let v = check_equicontinuous(odo.as_ref(), 3, 64, &pool).unwrap();
    assert_eq!(v.outcome, Outcome::True);
}
