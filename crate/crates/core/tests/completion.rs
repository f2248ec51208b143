//! Running joins and meets of the built-in certificates against their
//! closed forms, and the engine's refusal of weak-only carriers.

use measlat::completion_engine::{approx_limit, full_tlat_pipeline, running_join, EngineConfig, EngineError, SourceOracle};
use measlat::counterexamples::{DiameterCarrier, FiniteSubset, PointSpace};
use measlat::interval_sets::metric_d;
use measlat::metrized_lattice::{Dual, GapCertificate, IntervalCarrier};
use measlat::rational::{pow2_inv, rat, Rational};
use measlat::scenarios::{increasing_certificate, typewriter_certificate};
use measlat::IntervalSet;
use num_traits::One;
use proptest::prelude::*;

fn prefix(len: Rational) -> IntervalSet {
    IntervalSet::from_pairs([(rat(0, 1), len)].into_iter().filter(|(lo, hi)| lo < hi)).unwrap()
}

proptest! {
    #[test]
    fn typewriter_rows_join_to_their_first_term(h in 0usize..40, extra in 0usize..40) {
        let cert = typewriter_certificate();
        let j = h + extra;
        prop_assert_eq!(running_join(&IntervalCarrier, &cert, h, j).unwrap(), prefix(pow2_inv(h as u32)));
        prop_assert_eq!(running_join(&Dual(IntervalCarrier), &cert, h, j).unwrap(), prefix(pow2_inv(j as u32)));
    }

    #[test]
    fn increasing_sets_join_to_their_last_term(h in 0usize..40, extra in 0usize..40) {
        let cert = increasing_certificate();
        let j = h + extra;
        let last = |i: usize| prefix(Rational::one() - pow2_inv(i as u32));
        prop_assert_eq!(running_join(&IntervalCarrier, &cert, h, j).unwrap(), last(j));
        prop_assert_eq!(running_join(&Dual(IntervalCarrier), &cert, h, j).unwrap(), last(h));
    }

    #[test]
    fn approximations_meet_their_target(k in 1u32..20) {
        let eps = pow2_inv(k);
        let a = approx_limit(&IntervalCarrier, &typewriter_certificate(), &eps, 64).unwrap();
        prop_assert!(a.bound <= eps);
        prop_assert!(metric_d(&a.element, &IntervalSet::empty()) <= eps);
        let b = approx_limit(&Dual(IntervalCarrier), &increasing_certificate(), &eps, 64).unwrap();
        prop_assert!(metric_d(&b.element, &IntervalSet::unit()) <= eps);
    }
}

#[test]
fn reversed_range_is_rejected() {
    let err = running_join(&IntervalCarrier, &typewriter_certificate(), 5, 2).unwrap_err();
    assert!(matches!(err, EngineError::InvalidRange { .. }));
}

#[test]
fn diameter_lattice_is_refused() {
    let space = PointSpace::integers(&[0, 1, 10]);
    let cert: GapCertificate<FiniteSubset> = GapCertificate::constant(space.singleton(0));
    let carrier = DiameterCarrier { space };
    let oracle = SourceOracle::unavailable();
    let err = full_tlat_pipeline(&carrier, &cert, &oracle, EngineConfig::with_horizon(1)).unwrap_err();
    assert!(matches!(err, EngineError::WeakOnlyCarrier));
    let err = approx_limit(&carrier, &cert, &rat(1, 2), 1).unwrap_err();
    assert!(matches!(err, EngineError::WeakOnlyCarrier));
}
