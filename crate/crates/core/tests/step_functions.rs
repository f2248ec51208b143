//! Step functions over Z/6Z against pointwise evaluation on the grid of
//! cells of width 1/48, which refines every sampled cut point.

use measlat::algebra_star::{d_prime, d_prime_half_sum, d_prime_refinement, lift_op, FiniteAlgebra, StepFunction};
use measlat::rational::{rat, Rational};
use measlat::sampling::{random_step_function, stream_rng};
use proptest::prelude::*;

const GRID: i64 = 48;

fn midpoints() -> impl Iterator<Item = Rational> {
    (0..GRID).map(|c| rat(2 * c + 1, 2 * GRID))
}

fn pair(seed: u64) -> (StepFunction, StepFunction) {
    let z6 = FiniteAlgebra::integers_mod(6);
    let mut rng = stream_rng(seed, 0);
    (random_step_function(&mut rng, &z6), random_step_function(&mut rng, &z6))
}

fn disagreement(f: &StepFunction, g: &StepFunction) -> Rational {
    let n = midpoints().filter(|t| f.eval(t) != g.eval(t)).count();
    rat(n as i64, GRID)
}

proptest! {
    #[test]
    fn d_prime_is_the_disagreement_measure(seed in any::<u64>()) {
        let (f, g) = pair(seed);
        let oracle = disagreement(&f, &g);
        prop_assert_eq!(d_prime_refinement(&f, &g), oracle.clone());
        prop_assert_eq!(d_prime_half_sum(&f, &g), oracle.clone());
        prop_assert_eq!(d_prime(&f, &g), oracle);
    }

    #[test]
    fn lifted_ops_act_pointwise(seed in any::<u64>()) {
        let z6 = FiniteAlgebra::integers_mod(6);
        let (f, g) = pair(seed);
        for op in ["add", "mul"] {
            let h = lift_op(&z6, op, &[&f, &g]).unwrap();
            for t in midpoints() {
                let want = z6.apply(op, &[f.eval(&t).unwrap(), g.eval(&t).unwrap()]).unwrap();
                prop_assert_eq!(h.eval(&t).unwrap(), want);
            }
        }
    }

    #[test]
    fn lifted_ops_are_lipschitz(s1 in any::<u64>(), s2 in any::<u64>()) {
        let z6 = FiniteAlgebra::integers_mod(6);
        let (f1, f2) = pair(s1);
        let (g1, g2) = pair(s2);
        for op in ["add", "mul"] {
            let lhs = d_prime(&lift_op(&z6, op, &[&f1, &f2]).unwrap(), &lift_op(&z6, op, &[&g1, &g2]).unwrap());
            prop_assert!(lhs <= d_prime(&f1, &g1) + d_prime(&f2, &g2));
        }
    }
}

#[test]
fn constant_functions_are_at_distance_one() {
    let (a, b) = (StepFunction::constant("1"), StepFunction::constant("2"));
    assert_eq!(d_prime(&a, &b), rat(1, 1));
    assert_eq!(d_prime(&a, &a), rat(0, 1));
}
