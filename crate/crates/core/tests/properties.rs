mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use testspace::logic::{build_logic, is_algebraic};
use testspace::metric::{
    hausdorff_distance, matching_distance, matching_distance_bottleneck,
    matching_distance_exhaustive,
};
use testspace::states::{dispersion_free_supports, find_state, verify_state, ExactState};
use testspace::{OutcomeSet, TestSpace};

fn space_strategy() -> impl Strategy<Value = TestSpace> {
    any::<u64>().prop_map(|seed| common::random_space(&mut ChaCha8Rng::seed_from_u64(seed), 8, 4))
}

fn unit() -> impl Strategy<Value = Vec<f64>> {
    any::<u64>().prop_map(|seed| common::random_unit(&mut ChaCha8Rng::seed_from_u64(seed), 3))
}

fn point_set(max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(unit(), 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orthogonality_is_symmetric_and_irreflexive(ts in space_strategy()) {
        for x in 0..ts.outcome_count() {
            prop_assert!(!ts.orthogonal_idx(x, x));
            for y in 0..ts.outcome_count() {
                prop_assert_eq!(ts.orthogonal_idx(x, y), ts.orthogonal_idx(y, x));
            }
        }
    }

    #[test]
    fn events_are_closed_under_subsets(ts in space_strategy()) {
        let events = ts.enumerate_events().unwrap();
        prop_assert_eq!(events.len(), common::oracle_events(&ts).len());
        for e in &events {
            let members = e.members.as_slice();
            for mask in 0u64..1 << members.len() {
                prop_assert!(ts.is_event(&e.members.subset_by_mask(mask)));
            }
        }
    }

    #[test]
    fn perspectivity_is_reflexive_on_events_and_symmetric(ts in space_strategy()) {
        let events = ts.enumerate_events().unwrap();
        for a in &events {
            prop_assert!(ts.perspective(&a.members, &a.members));
            for b in &events {
                prop_assert_eq!(ts.perspective(&a.members, &b.members), ts.perspective(&b.members, &a.members));
            }
        }
    }

    #[test]
    fn algebraic_spaces_have_transitive_perspectivity(ts in space_strategy()) {
        prop_assume!(is_algebraic(&ts).unwrap().0);
        let events: Vec<OutcomeSet> = ts.enumerate_events().unwrap().into_iter().map(|e| e.members).collect();
        for a in &events {
            for b in &events {
                if !ts.perspective(a, b) {
                    continue;
                }
                for c in &events {
                    if ts.perspective(b, c) {
                        prop_assert!(ts.perspective(a, c));
                    }
                    if ts.complementary(b, c) {
                        prop_assert!(ts.complementary(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn logic_matches_oracle_and_natural_order(ts in space_strategy()) {
        prop_assume!(is_algebraic(&ts).unwrap().0);
        let logic = build_logic(&ts).unwrap();
        prop_assert_eq!(logic.len(), common::oracle_class_count(&ts));
        let oa = logic.algebra();
        for p in 0..oa.len() {
            for q in 0..oa.len() {
                prop_assert_eq!(oa.natural_order(p, q), oa.leq_via_complement(p, q));
            }
        }
        prop_assert!(oa.check_flags().flags_agree());
    }

    #[test]
    fn states_respect_complements(ts in space_strategy()) {
        let mut states: Vec<ExactState> = find_state(&ts).into_iter().collect();
        states.extend(dispersion_free_supports(&ts, None, 8).iter().map(|s| ExactState::indicator(&ts, s)));
        let events = ts.enumerate_events().unwrap();
        for s in &states {
            prop_assert!(verify_state(&ts, s).unwrap().valid);
            for a in &events {
                for c in ts.complements(&a.members) {
                    let total = s.event_value(&ts, &a.members).unwrap() + s.event_value(&ts, &c).unwrap();
                    prop_assert_eq!(total, num_rational::BigRational::from_integer(1.into()));
                }
                for b in &events {
                    if ts.perspective(&a.members, &b.members) {
                        prop_assert_eq!(s.event_value(&ts, &a.members).unwrap(), s.event_value(&ts, &b.members).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn hausdorff_is_a_metric(a in point_set(5), b in point_set(5), c in point_set(5)) {
        let ab = hausdorff_distance(&a, &b).unwrap();
        prop_assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        prop_assert_eq!(ab, hausdorff_distance(&b, &a).unwrap());
        let ac = hausdorff_distance(&a, &c).unwrap();
        let cb = hausdorff_distance(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb + 1e-12);
        if ab == 0.0 {
            for p in &a {
                prop_assert!(b.contains(p));
            }
        }
    }

    #[test]
    fn union_is_continuous(a in point_set(4), b in point_set(4), c in point_set(4)) {
        let ab: Vec<Vec<f64>> = a.iter().chain(&b).cloned().collect();
        let ac: Vec<Vec<f64>> = a.iter().chain(&c).cloned().collect();
        prop_assert!(hausdorff_distance(&ab, &ac).unwrap() <= hausdorff_distance(&b, &c).unwrap());
    }

    #[test]
    fn hausdorff_bounded_by_matching(pairs in prop::collection::vec((unit(), unit()), 1..=7)) {
        let (a, b): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let dm = matching_distance(&a, &b).unwrap();
        prop_assert!(hausdorff_distance(&a, &b).unwrap() <= dm);
        prop_assert_eq!(matching_distance_exhaustive(&a, &b).unwrap(), matching_distance_bottleneck(&a, &b).unwrap());
    }
}
