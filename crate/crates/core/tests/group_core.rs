use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use recurrence::group::{BallVariant, Element, Group, KVariant};

fn groups() -> Vec<Group> {
    vec![
        Group::integers(),
        Group::free_abelian(2).unwrap(),
        Group::free_abelian(3).unwrap(),
        Group::free(2).unwrap(),
        Group::cyclic(7).unwrap(),
        Group::symmetric3(),
    ]
}

fn pick(group: &Group, seed: u64, steps: usize) -> Element {
    group.random_element(&mut ChaCha8Rng::seed_from_u64(seed), steps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn word_length_is_subadditive_and_symmetric(gi in 0usize..6, a in any::<u64>(), b in any::<u64>(), steps in 0usize..12) {
        let group = &groups()[gi];
        let g = pick(group, a, steps);
        let h = pick(group, b, steps);
        let gh = group.compose(&g, &h).unwrap();
        prop_assert!(group.word_length(&gh) <= group.word_length(&g) + group.word_length(&h));
        prop_assert_eq!(group.word_length(&group.invert(&g).unwrap()), group.word_length(&g));
        prop_assert_eq!(group.compose(&g, &group.invert(&g).unwrap()).unwrap(), group.identity());
    }

    #[test]
    fn composition_is_associative(gi in 0usize..6, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let group = &groups()[gi];
        let (g, h, k) = (pick(group, a, 6), pick(group, b, 6), pick(group, c, 6));
        let left = group.compose(&group.compose(&g, &h).unwrap(), &k).unwrap();
        let right = group.compose(&g, &group.compose(&h, &k).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn closed_k_set_is_punctured_plus_base(gi in 0usize..4, a in any::<u64>(), steps in 1usize..7) {
        let group = &groups()[gi];
        let g = pick(group, a, steps);
        prop_assume!(group.word_length(&g) > 0);
        let closed = group.k_set(&g, KVariant::Closed).unwrap();
        let punctured = group.k_set(&g, KVariant::Punctured).unwrap();
        let mut rest: Vec<Element> = closed.elements.iter().filter(|h| **h != g).cloned().collect();
        rest.sort_by(|x, y| group.canonical_cmp(x, y));
        prop_assert!(closed.contains(&g));
        prop_assert!(!punctured.contains(&g));
        prop_assert_eq!(rest, punctured.elements.clone());
        for h in &punctured.elements {
            prop_assert!(group.in_k_set(h, &g, KVariant::Punctured));
            let d = group.word_length(&group.compose(h, &group.invert(&g).unwrap()).unwrap());
            prop_assert!(d > 0 && d < group.word_length(&g));
        }
    }

    #[test]
    fn cone_lower_is_inside_upper_and_subsequences_shrink_upper(r in 1u64..5, skip in 1usize..3) {
        let group = Group::free_abelian(2).unwrap();
        let seq: Vec<Element> = (1..=16i64).map(|n| group.vector(&[n * r as i64, n]).unwrap()).collect();
        let full = group.cone_approx(&seq, r, KVariant::Punctured).unwrap();
        for h in &full.lower {
            prop_assert!(full.upper.contains(h));
        }
        let sub: Vec<Element> = seq.iter().step_by(skip + 1).cloned().collect();
        if let Ok(part) = group.cone_approx(&sub, r, KVariant::Punctured) {
            for h in &part.upper {
                prop_assert!(full.upper.contains(h));
            }
            for h in &full.lower {
                prop_assert!(part.lower.contains(h));
            }
        }
    }
}

#[test]
fn ball_sizes_match_closed_forms() {
    for r in 0..6u64 {
        let cases = [
            (Group::integers(), 2 * r + 1),
            (Group::free_abelian(2).unwrap(), 2 * r * r + 2 * r + 1),
            (Group::free(2).unwrap(), 2 * 3u64.pow(r as u32) - 1),
        ];
        for (group, expected) in cases {
            let ball = group.ball(r, BallVariant::Closed).unwrap();
            assert_eq!(ball.len() as u64, expected, "{} radius {r}", group.name());
            assert_eq!(group.closed_ball_size(r), Some(expected as u128));
            let punctured = group.ball(r, BallVariant::Punctured).unwrap();
            assert_eq!(punctured.len() + 1, ball.len());
            assert!(!punctured.contains(&group.identity()));
        }
    }
}

#[test]
fn balls_grow_with_radius() {
    for group in groups() {
        let mut prev = group.ball(0, BallVariant::Closed).unwrap();
        for r in 1..5 {
            let next = group.ball(r, BallVariant::Closed).unwrap();
            assert!(prev.iter().all(|g| next.contains(g)), "{} radius {r}", group.name());
            prev = next;
        }
    }
}

#[test]
fn finite_groups_stop_growing_at_their_order() {
    let s3 = Group::symmetric3();
    assert_eq!(s3.ball(10, BallVariant::Closed).unwrap().len(), 6);
    assert_eq!(Group::cyclic(7).unwrap().ball(10, BallVariant::Closed).unwrap().len(), 7);
}

#[test]
fn free_group_words_reduce() {
    let f2 = Group::free(2).unwrap();
    let g = f2.word("abBA").unwrap();
    assert_eq!(g, f2.identity());
    assert_eq!(f2.word_length(&f2.word("abab").unwrap()), 4);
    assert!(f2.word("abx").is_err());
}

#[test]
fn integer_k_sets_are_intervals() {
    let z = Group::integers();
    let k = z.k_set(&Element::Int(4), KVariant::Punctured).unwrap();
    let mut vals: Vec<i64> = k.elements.iter().filter_map(Element::as_int).collect();
    vals.sort();
    assert_eq!(vals, vec![1, 2, 3, 5, 6, 7]);
    assert!(z.k_set(&Element::Int(0), KVariant::Punctured).is_err());
}

#[test]
fn integer_cone_of_positive_times_is_the_positive_half_line() {
    let z = Group::integers();
    let seq: Vec<Element> = (1..=40).map(Element::Int).collect();
    let cone = z.cone_approx(&seq, 5, KVariant::Punctured).unwrap();
    assert!(cone.stabilized);
    let vals: Vec<i64> = cone.lower.iter().filter_map(Element::as_int).collect();
    assert_eq!(vals, vec![1, 2, 3, 4, 5]);
    assert!(z.cone_approx(&seq[..4], 5, KVariant::Punctured).is_err());
}
