use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use recurrence::cantor::{CellSpace, ClopenSet, Point};
use recurrence::flow::{
    build_finite_action, build_odometer, build_one_dot_subshift, build_substitution_subshift, check_action_axioms,
    orbit_closure_cells, product, random_finite_action, return_times, Flow, Substitution,
};
use recurrence::group::{BallVariant, Element, Group};

fn systems() -> Vec<Arc<dyn Flow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    vec![
        Arc::new(build_odometer(2).unwrap()),
        Arc::new(build_odometer(5).unwrap()),
        Arc::new(build_one_dot_subshift()),
        Arc::new(Substitution::thue_morse()),
        Arc::new(Substitution::fibonacci()),
        Arc::new(random_finite_action(Group::free(2).unwrap(), 9, &mut rng).unwrap()),
        Arc::new(random_finite_action(Group::free_abelian(2).unwrap(), 8, &mut rng).unwrap()),
        Arc::new(product(Arc::new(build_odometer(2).unwrap()))),
    ]
}

#[test]
fn every_system_satisfies_the_action_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for sys in systems() {
        let group = sys.group();
        let mut points = sys.base_points();
        points.extend(sys.sample_points(&mut rng, 6));
        let triples: Vec<_> = points
            .iter()
            .map(|x| (group.random_element(&mut rng, 9), group.random_element(&mut rng, 9), x.clone()))
            .collect();
        let level = 3.min(sys.depth());
        assert_eq!(check_action_axioms(sys.as_ref(), &triples, level).unwrap(), None, "{}", sys.name());
    }
}

#[test]
fn odometer_adds_and_respects_levels() {
    let odo = build_odometer(2).unwrap();
    assert_eq!(odo.act(&Element::Int(3), &Point::adic(0, 1)).unwrap(), Point::adic(3, 1));
    assert_eq!(odo.act(&Element::Int(-1), &Point::adic(0, 1)).unwrap(), Point::adic(-1, 1));
    for n in [0i128, 1, 5, -7] {
        let x = Point::adic(n, 3);
        let y = odo.act(&Element::Int(8), &x).unwrap();
        assert_ne!(x, y);
        assert_eq!(odo.cell_of(&x, 3).unwrap(), odo.cell_of(&y, 3).unwrap());
        assert_ne!(odo.cell_of(&x, 4).unwrap(), odo.cell_of(&y, 4).unwrap());
        assert_ne!(odo.cell_of(&x, 1).unwrap(), odo.cell_of(&odo.act(&Element::Int(1), &x).unwrap(), 1).unwrap());
    }
}

#[test]
fn odometer_return_times_are_multiples_of_the_modulus() {
    let odo = build_odometer(3).unwrap();
    let x = odo.zero();
    let target = ClopenSet::cylinder(odo.cell_of(&x, 2).unwrap());
    let set = return_times(&odo, &x, &target, 40).unwrap();
    let vals: Vec<i64> = set.elements.iter().filter_map(Element::as_int).collect();
    assert!(!vals.is_empty());
    assert!(vals.iter().all(|v| v % 9 == 0));
    assert_eq!(vals.len(), 9);
}

#[test]
fn one_dot_orbits() {
    let dot = build_one_dot_subshift();
    let zero = dot.zero();
    assert_eq!(dot.act(&Element::Int(17), &zero).unwrap(), zero);
    let moved = dot.act(&Element::Int(4), &dot.marked()).unwrap();
    assert!(matches!(moved, Point::Mark { position } if position.abs() == 4));
    for k in 1..5 {
        let marked = orbit_closure_cells(&dot, &dot.marked(), k, 64).unwrap();
        assert_eq!(marked.cells.len(), 2 * k + 2, "level {k}");
        assert_eq!(orbit_closure_cells(&dot, &zero, k, 64).unwrap().cells.len(), 1);
    }
}

#[test]
fn substitution_orbit_closures_match_their_language() {
    for sys in [Substitution::thue_morse(), Substitution::fibonacci()] {
        for &(a, b) in sys.seeds() {
            let x = Point::Shift { left: a, right: b, offset: 0 };
            for level in 1..4 {
                let approx = orbit_closure_cells(&sys, &x, level, 400).unwrap();
                assert!(approx.exact, "{} level {level}", sys.name());
            }
        }
    }
}

#[test]
fn thue_morse_symbols_follow_the_rule() {
    let tm = Substitution::thue_morse();
    let seed = tm.seeds()[0];
    let right = tm.symbols(seed, 0, 16).unwrap();
    for i in 0..8 {
        assert_eq!(right[2 * i] + right[2 * i + 1], 1, "pair {i} of {right:?}");
    }
}

#[test]
fn substitution_validation() {
    assert!(build_substitution_subshift("ok", vec![vec![0, 1], vec![1, 0]]).is_ok());
    assert!(build_substitution_subshift("identity", vec![vec![0], vec![1]]).is_err());
    assert!(build_substitution_subshift("reducible", vec![vec![0, 0], vec![0, 1]]).is_err());
    assert!(build_substitution_subshift("empty", vec![vec![0, 1], vec![]]).is_err());
    assert!(build_substitution_subshift("foreign", vec![vec![0, 2], vec![1, 0]]).is_err());
    assert!(build_substitution_subshift("unary", vec![vec![0, 0]]).is_err());
}

#[test]
fn finite_actions_must_respect_relations() {
    let c3 = Group::cyclic(3).unwrap();
    let ok = build_finite_action(c3.clone(), vec![vec![1, 2, 0, 3]]).unwrap();
    assert_eq!(ok.size(), 4);
    assert_eq!(ok.orbits().len(), 2);
    assert!(build_finite_action(c3.clone(), vec![vec![1, 0, 2]]).is_err());
    assert!(build_finite_action(c3.clone(), vec![vec![0, 0, 1]]).is_err());
    assert!(build_finite_action(c3, vec![vec![0], vec![0]]).is_err());
    let z2 = Group::free_abelian(2).unwrap();
    assert!(build_finite_action(z2.clone(), vec![vec![1, 2, 0], vec![0, 2, 1]]).is_err());
    assert!(build_finite_action(z2, vec![vec![1, 2, 0], vec![2, 0, 1]]).is_ok());
}

#[test]
fn product_diagonal_is_invariant() {
    let odo: Arc<dyn Flow> = Arc::new(build_odometer(2).unwrap());
    let sq = product(odo);
    let diag = sq.diagonal(3).unwrap();
    let x = Point::adic(5, 1);
    let on = Point::pair(x.clone(), x.clone());
    let off = Point::pair(x.clone(), Point::adic(6, 1));
    assert!(diag.contains(&sq, &on).unwrap());
    assert!(!diag.contains(&sq, &off).unwrap());
    for n in [-9, 1, 4, 100] {
        assert!(diag.contains(&sq, &sq.act(&Element::Int(n), &on).unwrap()).unwrap());
        assert!(!diag.contains(&sq, &sq.act(&Element::Int(n), &off).unwrap()).unwrap());
    }
}

#[test]
fn random_actions_of_table_groups_respect_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for group in [Group::symmetric3(), Group::cyclic(4).unwrap()] {
        for _ in 0..10 {
            let sys = random_finite_action(group.clone(), 13, &mut rng).unwrap();
            let triples: Vec<_> = sys
                .base_points()
                .into_iter()
                .map(|x| (group.random_element(&mut rng, 5), group.random_element(&mut rng, 5), x))
                .collect();
            assert_eq!(check_action_axioms(&sys, &triples, 1).unwrap(), None);
            let order = group.ball(9, BallVariant::Closed).unwrap().len();
            assert!(sys.orbits().iter().all(|o| o.len() == 1 || o.len() == order));
        }
    }
    assert!(random_finite_action(Group::product(vec![Group::integers(), Group::integers()]).unwrap(), 4, &mut rng).is_err());
}
