use galsym_core::elliptic::{bundled_corpus, IntPoly, Reduction, WeierstrassCurve};
use galsym_core::padic::{
    approximate_point, hensel_root, random_point, verify_certificate, ApproximationCertificate, DepthPolicy, PadicCurve,
    PadicNumber,
};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

const PRIMES: [u32; 5] = [3, 5, 7, 11, 13];

fn ordinary_at(p: u32) -> Vec<PadicCurve> {
    bundled_corpus()
        .iter()
        .filter(|c| c.reduction_type(p as u64).unwrap() == Reduction::GoodOrdinary)
        .map(|c| PadicCurve::new(c, p).unwrap())
        .filter(|pc| random_point(pc, 0, 4).is_ok())
        .collect()
}

proptest! {
    #[test]
    fn hensel_root_is_a_root_to_the_requested_precision(
        coeffs in prop::collection::vec(-30i64..30, 2..6),
        i in 0usize..5,
        n in 1u32..40,
    ) {
        let p = PRIMES[i];
        let f = IntPoly::from_i64(&coeffs);
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let df = f.derivative();
        let r0 = (0..p as u64).find(|&r| f.eval_mod(r, p as u64) == 0 && df.eval_mod(r, p as u64) != 0);
        prop_assume!(r0.is_some());
        let r0 = r0.unwrap();
        let r = hensel_root(&f, r0, p, n).unwrap();
        let modulus = BigInt::from(p).pow(n);
        let rv = r.residue(n).unwrap();
        prop_assert!(f.eval(&rv).mod_floor(&modulus) == BigInt::from(0));
        prop_assert!(rv.mod_floor(&BigInt::from(p)) == BigInt::from(r0));
    }

    #[test]
    fn the_two_ordinates_are_conjugate(ci in 0usize..10, i in 0usize..3, x in -200i64..200) {
        let c = &bundled_corpus()[ci];
        let p = PRIMES[i];
        prop_assume!(c.has_good_reduction(p as u64));
        let pc = PadicCurve::new(c, p).unwrap();
        let xp = PadicNumber::from_i64(p, x, 30);
        let pts = pc.points_with_x(&xp);
        if pts.len() == 2 {
            let sum = pts[0].y().unwrap().add(pts[1].y().unwrap()).add(&pc.linear_term(&xp));
            prop_assert!(sum.is_zero());
            prop_assert!(pts.iter().all(|q| pc.is_on_curve(q)));
        }
    }
}

#[test]
fn raising_precision_never_withdraws_divisibility() {
    for p in [3u32, 5] {
        for pc in ordinary_at(p) {
            for seed in 0..6 {
                let q = random_point(&pc, seed, 48).unwrap();
                let pq = pc.mul(p as i64, &q).unwrap();
                for pt in [q, pq] {
                    let mut certified = false;
                    for n in [8i64, 12, 16, 24, 32] {
                        match pc.in_pe(&pt.truncate(n)) {
                            Ok(true) => certified = true,
                            Ok(false) => assert!(!certified, "{} p={p} seed {seed}: verdict flipped at {n}", pc.curve().label),
                            Err(_) => {}
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn certificates_survive_a_json_round_trip() {
    for p in [3u32, 5] {
        for pc in ordinary_at(p) {
            let pt = random_point(&pc, 7, 40).unwrap();
            let cert = approximate_point(&pc, &pt, &DepthPolicy::default()).unwrap();
            assert!(cert.verified && cert.depth <= 16);
            let json = serde_json::to_string(&cert).unwrap();
            let back: ApproximationCertificate = serde_json::from_str(&json).unwrap();
            assert!(verify_certificate(&back).unwrap(), "{} at {p}", pc.curve().label);
            let again = approximate_point(&pc, &random_point(&pc, 7, 40).unwrap(), &DepthPolicy::default()).unwrap();
            assert_eq!(serde_json::to_string(&again).unwrap(), json);
        }
    }
}

#[test]
fn tampered_certificates_fail() {
    let pc = PadicCurve::new(&WeierstrassCurve::short("e", 1, 1).unwrap(), 5).unwrap();
    let cert = approximate_point(&pc, &random_point(&pc, 1, 40).unwrap(), &DepthPolicy::default()).unwrap();
    let mut bad = cert.clone();
    bad.x = "1000001/1".into();
    assert!(!verify_certificate(&bad).unwrap_or(false));
    let mut bad = cert;
    bad.curve[4] += 1;
    assert!(!verify_certificate(&bad).unwrap_or(false));
}
