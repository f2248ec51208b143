//! The diameter lattice on integer point sets, against a bitmask search
//! where the diameter of a set of integers is its max minus its min.

use measlat::counterexamples::{d_l, find_dv_violation, PointSpace};
use measlat::rational::int;
use proptest::prelude::*;

fn spread(points: &[i64], mask: u32) -> i64 {
    let chosen: Vec<i64> = (0..points.len()).filter(|i| mask >> i & 1 == 1).map(|i| points[i]).collect();
    chosen.iter().max().unwrap() - chosen.iter().min().unwrap()
}

fn dist(points: &[i64], a: u32, b: u32) -> i64 {
    if a == b {
        0
    } else {
        spread(points, a | b)
    }
}

fn distinct_points() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(-20i64..20, 1..5).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #[test]
    fn d_l_is_the_spread_of_the_union(points in distinct_points(), a in 1u32..16, b in 1u32..16) {
        let full = (1u32 << points.len()) - 1;
        let (a, b) = (a & full, b & full);
        prop_assume!(a != 0 && b != 0);
        let space = PointSpace::integers(&points);
        let sub = |m: u32| space.subset((0..points.len()).filter(|i| m >> i & 1 == 1)).unwrap();
        prop_assert_eq!(d_l(&space, &sub(a), &sub(b)), int(dist(&points, a, b)));
    }

    #[test]
    fn witness_search_agrees_with_brute_force(points in distinct_points()) {
        let full = 1u32 << points.len();
        let brute = (1..full).any(|x| {
            (1..full).any(|y| (1..full).any(|z| dist(&points, x | y, x | z) > dist(&points, y, z)))
        });
        let found = find_dv_violation(&PointSpace::integers(&points), points.len());
        prop_assert_eq!(found.is_some(), brute);
        if let Some(w) = found {
            prop_assert!(w.lhs > w.rhs);
        }
    }
}

#[test]
fn three_points_with_a_far_neighbour_break_the_join_bound() {
    let w = find_dv_violation(&PointSpace::integers(&[0, 1, 10]), 4).unwrap();
    assert_eq!((w.x, w.y, w.z), (vec!["0".to_string()], vec!["1".to_string()], vec!["10".to_string()]));
    assert_eq!((w.lhs, w.rhs), (int(10), int(9)));
}
