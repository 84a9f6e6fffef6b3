use galsym_core::elliptic::{
    bundled_corpus, division_polynomial, primes_up_to, theorem_a_scan, Reduction, VerdictReason, WeierstrassCurve,
};
use num_bigint::BigInt;
use proptest::prelude::*;

const SMALL_PRIMES: [u64; 25] =
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

fn within_hasse(c: &WeierstrassCurve, p: u64) -> bool {
    let ap = c.ap(p).unwrap();
    (ap * ap) as u64 <= 4 * p
}

#[test]
fn corpus_point_counts_agree_and_obey_hasse() {
    for c in bundled_corpus() {
        for p in SMALL_PRIMES.into_iter().filter(|&p| c.has_good_reduction(p)) {
            assert_eq!(c.count_points(p).unwrap(), c.count_points_naive(p), "{} at {p}", c.label);
            assert!(within_hasse(&c, p), "{} at {p}", c.label);
        }
    }
}

#[test]
fn regression_fixtures() {
    assert_eq!(WeierstrassCurve::short("a", 1, 1).unwrap().ap(5).unwrap(), -3);
    assert_eq!(WeierstrassCurve::short("b", 0, 1).unwrap().ap(5).unwrap(), 0);
    let c37 = WeierstrassCurve::new("37a1", [0, 0, 1, -1, 0]).unwrap();
    assert_eq!(c37.discriminant(), 37);
    assert_eq!(c37.reduction_type(37).unwrap(), Reduction::Bad);
    assert_eq!(WeierstrassCurve::short("b", 0, 1).unwrap().reduction_type(5).unwrap(), Reduction::GoodSupersingular);
}

#[test]
fn division_polynomial_degrees() {
    let c = WeierstrassCurve::short("a", 1, 1).unwrap();
    for n in [3usize, 5, 7, 11] {
        let f = division_polynomial(&c, n).poly;
        assert_eq!(f.degree(), Some((n * n - 1) / 2));
        assert_eq!(f.leading(), BigInt::from(n));
    }
}

#[test]
fn scan_reports_every_prime_once_with_its_reason() {
    for c in bundled_corpus() {
        let verdicts = theorem_a_scan(&c, 500).unwrap();
        let primes: Vec<u64> = verdicts.iter().map(|v| v.p).collect();
        assert_eq!(primes, primes_up_to(500));
        for v in &verdicts {
            let expected = match (v.p, v.reduction) {
                (2, _) => VerdictReason::SmallPrimeNotCovered,
                (_, Reduction::Bad) => VerdictReason::Bad,
                (_, Reduction::GoodSupersingular) => VerdictReason::SupersingularOutOfScope,
                (3, Reduction::GoodOrdinary) => VerdictReason::SmallPrimeNotCovered,
                (_, Reduction::GoodOrdinary) => VerdictReason::DegreeBound,
            };
            assert_eq!(v.reason, expected, "{} at {}", c.label, v.p);
            assert_eq!(v.eliminated, expected == VerdictReason::DegreeBound);
        }
        assert_eq!(verdicts, theorem_a_scan(&c, 500).unwrap());
    }
}

fn nonsingular(a: [i64; 5]) -> Option<WeierstrassCurve> {
    WeierstrassCurve::new("random", a).ok()
}

proptest! {
    #[test]
    fn two_point_counts_agree_on_short_curves(a in -60i64..60, b in -60i64..60, i in 0usize..25) {
        let c = WeierstrassCurve::short("random", a, b);
        prop_assume!(c.is_ok());
        let c = c.unwrap();
        let p = SMALL_PRIMES[i];
        prop_assume!(c.has_good_reduction(p));
        prop_assert_eq!(c.count_points(p).unwrap(), c.count_points_naive(p));
        prop_assert!(within_hasse(&c, p));
    }

    #[test]
    fn two_point_counts_agree_on_general_models(a in prop::array::uniform5(-20i64..20), i in 0usize..25) {
        let c = nonsingular(a);
        prop_assume!(c.is_some());
        let c = c.unwrap();
        prop_assert!(c.invariants_consistent());
        let p = SMALL_PRIMES[i];
        prop_assume!(c.has_good_reduction(p));
        prop_assert_eq!(c.count_points(p).unwrap(), c.count_points_naive(p));
    }

    #[test]
    fn translation_preserves_reduction_and_trace(a in -40i64..40, b in -40i64..40, i in 1usize..25) {
        let c = WeierstrassCurve::short("random", a, b);
        prop_assume!(c.is_ok());
        let c = c.unwrap();
        let t = c.translate_x(1).unwrap();
        prop_assert_eq!(t.discriminant(), c.discriminant());
        let p = SMALL_PRIMES[i];
        prop_assert_eq!(t.reduction_type(p).unwrap(), c.reduction_type(p).unwrap());
        if c.has_good_reduction(p) {
            prop_assert_eq!(t.ap(p).unwrap(), c.ap(p).unwrap());
        }
    }
}
