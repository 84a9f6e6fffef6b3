use serde::{Deserialize, Serialize};

use super::{EllipticError, Reduction, WeierstrassCurve};

/// Why a prime was or was not eliminated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VerdictReason {
    #[serde(rename = "BAD")]
    Bad,
    #[serde(rename = "SUPERSINGULAR-OUT-OF-SCOPE")]
    SupersingularOutOfScope,
    /// `p - 1` exceeds the admissible cyclotomic degree.
    #[serde(rename = "DEGREE-BOUND")]
    DegreeBound,
    #[serde(rename = "SMALL-PRIME-NOT-COVERED")]
    SmallPrimeNotCovered,
}

impl VerdictReason {
    pub const ALL: [VerdictReason; 4] =
        [Self::Bad, Self::SupersingularOutOfScope, Self::DegreeBound, Self::SmallPrimeNotCovered];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Bad => "BAD",
            Self::SupersingularOutOfScope => "SUPERSINGULAR-OUT-OF-SCOPE",
            Self::DegreeBound => "DEGREE-BOUND",
            Self::SmallPrimeNotCovered => "SMALL-PRIME-NOT-COVERED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeVerdict {
    pub label: String,
    pub p: u64,
    pub reduction: Reduction,
    /// `None` at bad primes.
    pub ap: Option<i64>,
    pub eliminated: bool,
    pub reason: VerdictReason,
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// Verdicts for every prime `p <= bound`, ordered by `p`, with the
/// Galois-closure degree over `Q` taken to be 1.
pub fn theorem_a_scan(c: &WeierstrassCurve, bound: u64) -> Result<Vec<PrimeVerdict>, EllipticError> {
    theorem_a_scan_with_degree(c, bound, 1)
}

/// As [`theorem_a_scan`] for an abstract Galois-closure degree `degree`: an
/// odd good-ordinary `p` is eliminated when `p - 1 > max(2, degree)`.
/// `p = 2` is reported but never eliminated.
pub fn theorem_a_scan_with_degree(
    c: &WeierstrassCurve,
    bound: u64,
    degree: u64,
) -> Result<Vec<PrimeVerdict>, EllipticError> {
    if bound < 3 {
        return Err(EllipticError::InvalidArgument(format!("bound must be at least 3, got {bound}")));
    }
    if degree == 0 {
        return Err(EllipticError::InvalidArgument("degree must be positive".into()));
    }
    let threshold = degree.max(2);
    primes_up_to(bound)
        .into_iter()
        .map(|p| {
            let reduction = c.reduction_type(p)?;
            let ap = match reduction {
                Reduction::Bad => None,
                _ => Some(c.ap(p)?),
            };
            let (eliminated, reason) = match reduction {
                _ if p == 2 => (false, VerdictReason::SmallPrimeNotCovered),
                Reduction::Bad => (false, VerdictReason::Bad),
                Reduction::GoodSupersingular => (false, VerdictReason::SupersingularOutOfScope),
                Reduction::GoodOrdinary if p - 1 > threshold => (true, VerdictReason::DegreeBound),
                Reduction::GoodOrdinary => (false, VerdictReason::SmallPrimeNotCovered),
            };
            Ok(PrimeVerdict { label: c.label.clone(), p, reduction, ap, eliminated, reason })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensitySample {
    pub good_primes: usize,
    pub ordinary_primes: usize,
    pub fraction: f64,
}

/// Fraction of odd primes `p <= bound` of good reduction that are ordinary.
pub fn ordinary_density_sample(c: &WeierstrassCurve, bound: u64) -> Result<DensitySample, EllipticError> {
    if bound < 10 {
        return Err(EllipticError::InvalidArgument(format!("bound must be at least 10, got {bound}")));
    }
    let mut good = 0;
    let mut ordinary = 0;
    for p in primes_up_to(bound).into_iter().filter(|&p| p > 2) {
        match c.reduction_type(p)? {
            Reduction::Bad => {}
            r => {
                good += 1;
                ordinary += usize::from(r == Reduction::GoodOrdinary);
            }
        }
    }
    let fraction = if good == 0 { 0.0 } else { ordinary as f64 / good as f64 };
    Ok(DensitySample { good_primes: good, ordinary_primes: ordinary, fraction })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(10_000).len(), 1229);
    }

    #[test]
    fn scan_37a1() {
        let e = WeierstrassCurve::new("37a1", [0, 0, 1, -1, 0]).unwrap();
        let v = theorem_a_scan(&e, 50).unwrap();
        assert_eq!(v.iter().map(|r| r.p).collect::<Vec<_>>(), primes_up_to(50));
        for r in &v {
            if r.reduction == Reduction::GoodOrdinary && r.p >= 5 {
                assert!(r.eliminated);
                assert_eq!(r.reason, VerdictReason::DegreeBound);
            }
            if r.eliminated {
                assert!(r.p > 2 && r.reduction == Reduction::GoodOrdinary);
            }
        }
        let r37 = v.iter().find(|r| r.p == 37).unwrap();
        assert_eq!((r37.reduction, r37.reason, r37.ap), (Reduction::Bad, VerdictReason::Bad, None));
        assert_eq!(v[0].reason, VerdictReason::SmallPrimeNotCovered);
    }

    #[test]
    fn supersingular_flag() {
        let e = WeierstrassCurve::short("e", 0, 1).unwrap();
        let v = theorem_a_scan(&e, 5).unwrap();
        let r5 = v.iter().find(|r| r.p == 5).unwrap();
        assert_eq!(r5.reason, VerdictReason::SupersingularOutOfScope);
        assert!(!r5.eliminated);
    }

    #[test]
    fn larger_degree_keeps_small_primes() {
        let e = WeierstrassCurve::short("e", 1, 1).unwrap();
        let v = theorem_a_scan_with_degree(&e, 30, 10).unwrap();
        for r in &v {
            if r.eliminated {
                assert!(r.p - 1 > 10);
            }
        }
    }

    #[test]
    fn density() {
        let e = WeierstrassCurve::short("e", 1, 1).unwrap();
        let d = ordinary_density_sample(&e, 200).unwrap();
        assert!(d.fraction > 0.5 && d.fraction <= 1.0);
        let cm = WeierstrassCurve::short("cm", -1, 0).unwrap();
        let d = ordinary_density_sample(&cm, 200).unwrap();
        assert!((d.fraction - 0.5).abs() <= 0.15, "{d:?}");
        assert!(ordinary_density_sample(&e, 10).unwrap().good_primes > 0);
        assert!(ordinary_density_sample(&e, 9).is_err());
    }
}
