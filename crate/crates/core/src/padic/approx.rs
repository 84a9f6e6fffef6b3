use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::number::{p_pow, PadicNumber};
use super::point::{CurvePointPadic, PadicCurve, DIVISION_LEVEL};
use super::PadicError;
use crate::elliptic::{Reduction, WeierstrassCurve};

/// Depths tried for the rational approximation and the working precisions
/// used to certify each depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthPolicy {
    pub depth_max: u32,
    pub initial_precision: u32,
    pub max_precision: u32,
}

impl Default for DepthPolicy {
    fn default() -> Self {
        Self { depth_max: 16, initial_precision: 8, max_precision: 32 }
    }
}

impl DepthPolicy {
    pub fn with_depth_max(depth_max: u32) -> Self {
        Self { depth_max, ..Self::default() }
    }

    fn precisions(&self, depth: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut w = self.initial_precision.max(1);
        while w <= self.max_precision {
            if w > depth {
                out.push(w);
            }
            w *= 2;
        }
        if out.is_empty() {
            out.push(self.max_precision.max(depth + 1));
        }
        out
    }
}

/// Evidence that a point with rational abscissa, defined over a field of
/// degree at most 2, is congruent to `P1` modulo `pE(Q_p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximationCertificate {
    pub label: String,
    pub curve: [i64; 5],
    pub p: u32,
    pub input_point: CurvePointPadic,
    /// Exact coordinates when `P1` is a rational point.
    pub input_rational: Option<[String; 2]>,
    /// Rational abscissa `num/den` of the lifted point.
    pub x: String,
    /// Discriminant `(a1 x + a3)^2 + 4(x^3 + a2 x^2 + a4 x + a6)` of the
    /// `y`-quadratic; its square class determines the field of definition.
    pub quad_disc: String,
    /// The discriminant is a rational square (the point is rational).
    pub quad_trivial: bool,
    pub depth: u32,
    pub working_precision: u32,
    pub lifted_point: CurvePointPadic,
    pub difference: CurvePointPadic,
    pub witness: CurvePointPadic,
    /// Certified `n` with `difference - p · witness ∈ E_n(Q_p)`; `None` when
    /// the two agree exactly (both `O`).
    pub level: Option<i64>,
    /// Digits to which `p · witness` matches the difference.
    pub agreement: Option<i64>,
    pub verified: bool,
    pub transcript: Vec<String>,
}

pub fn rational_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `"n/d"` or an integer `"n"`.
pub fn parse_rational(s: &str) -> Result<BigRational, PadicError> {
    let bad = || PadicError::Parse(format!("expected num/den or an integer, got {s:?}"));
    let (n, d) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Exact `(a1 x + a3)^2 + 4(x^3 + a2 x^2 + a4 x + a6)` at rational `x`.
pub fn y_discriminant_rational(c: &WeierstrassCurve, x: &BigRational) -> BigRational {
    let [a1, a2, a3, a4, a6] = c.coefficients().map(|a| BigRational::from_integer(BigInt::from(a)));
    let l = &a1 * x + &a3;
    let cubic = ((x + &a2) * x + &a4) * x + &a6;
    &l * &l + BigRational::from_integer(BigInt::from(4)) * cubic
}

fn is_integer_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn is_rational_square(q: &BigRational) -> bool {
    is_integer_square(q.numer()) && is_integer_square(q.denom())
}

/// The rational `x ≡ x1 (mod p^depth)`: the least nonnegative residue for
/// integral `x1`, otherwise `p^v` times the least residue of the unit part.
pub fn canonical_abscissa(x1: &PadicNumber, depth: u32) -> Result<BigRational, PadicError> {
    let p = x1.p();
    if x1.abs_prec() < depth as i64 {
        return Err(PadicError::PrecisionExhausted);
    }
    if x1.valuation() >= 0 {
        return Ok(BigRational::from_integer(x1.residue(depth)?));
    }
    let v = x1.valuation().unsigned_abs() as u32;
    let m = p_pow(p, depth + v);
    let u = x1.unit() % &m;
    Ok(BigRational::new(u, p_pow(p, v)))
}

fn check_ordinary(pc: &PadicCurve) -> Result<(), PadicError> {
    match pc.curve().reduction_type(pc.p() as u64).map_err(|e| PadicError::Curve(e.to_string()))? {
        Reduction::GoodOrdinary => Ok(()),
        r => Err(PadicError::NotOrdinary { p: pc.p(), reduction: r.as_str().to_string() }),
    }
}

/// The `y`-value over `Q_p` at rational `x`, on the branch congruent to
/// `y1` mod `p`.
fn lift_y(pc: &PadicCurve, x: &BigRational, y1: &PadicNumber, w: u32) -> Option<CurvePointPadic> {
    let xp = PadicNumber::from_rational(pc.p(), x, w as i64);
    pc.points_with_x(&xp).into_iter().find(|q| {
        let d = q.y().expect("affine").sub(y1);
        d.is_zero() || d.valuation() >= 1
    })
}

/// Searches depths `1..=depth_max` for a rational `x ≡ x1 (mod p^depth)`
/// whose point `P` on the branch of `y1` satisfies `P - P1 ∈ pE(Q_p)`.
pub fn approximate_point(
    pc: &PadicCurve,
    p1: &CurvePointPadic,
    policy: &DepthPolicy,
) -> Result<ApproximationCertificate, PadicError> {
    check_ordinary(pc)?;
    let CurvePointPadic::Affine { x: x1, y: y1 } = p1 else {
        return Err(PadicError::NotAffine);
    };
    if pc.two_torsion_form(x1, y1).is_zero() {
        return Err(PadicError::TwoTorsion);
    }
    if !pc.is_on_curve(p1) {
        return Err(PadicError::NotOnCurve);
    }
    let mut transcript = Vec::new();
    for depth in 1..=policy.depth_max {
        let x = match canonical_abscissa(x1, depth) {
            Ok(x) => x,
            Err(PadicError::PrecisionExhausted) => break,
            Err(e) => return Err(e),
        };
        let disc = y_discriminant_rational(pc.curve(), &x);
        let trivial = is_rational_square(&disc);
        for w in policy.precisions(depth) {
            let p1w = p1.truncate(w as i64);
            let Some(lifted) = lift_y(pc, &x, y1, w) else {
                transcript.push(format!("depth {depth}, precision {w}: no y on the branch of y1"));
                break;
            };
            let diff = match pc.sub(&lifted, &p1w) {
                Ok(d) => d,
                Err(PadicError::PrecisionExhausted) => {
                    transcript.push(format!("depth {depth}, precision {w}: P - P1 not resolved"));
                    continue;
                }
                Err(e) => return Err(e),
            };
            match pc.divide_by_p_detailed(&diff) {
                Ok(Some(div)) => {
                    transcript.push(format!("depth {depth}: x = {} ≡ x1 mod {}^{depth}", rational_string(&x), pc.p()));
                    transcript.push(format!(
                        "y-discriminant {} ({})",
                        rational_string(&disc),
                        if trivial { "rational square" } else { "not a rational square; square in Q_p" }
                    ));
                    transcript.push(format!("working precision {w}: P - P1 = {}", describe(&diff)));
                    transcript.push(format!("witness Q = {} with {}·Q = P - P1", describe(&div.witness), pc.p()));
                    transcript.push(format!(
                        "P - P1 - {}·Q lies in E_{}(Q_{}); coordinates agree to {} digits; {} candidate preimages",
                        pc.p(),
                        fmt_finite(div.level),
                        pc.p(),
                        fmt_finite(div.agreement),
                        div.candidates
                    ));
                    return Ok(ApproximationCertificate {
                        label: pc.curve().label.clone(),
                        curve: pc.curve().coefficients(),
                        p: pc.p(),
                        input_point: p1.clone(),
                        input_rational: None,
                        x: rational_string(&x),
                        quad_disc: rational_string(&disc),
                        quad_trivial: trivial,
                        depth,
                        working_precision: w,
                        lifted_point: lifted,
                        difference: diff,
                        witness: div.witness,
                        level: finite(div.level),
                        agreement: finite(div.agreement),
                        verified: true,
                        transcript,
                    });
                }
                Ok(None) => {
                    transcript.push(format!("depth {depth}, precision {w}: P - P1 not in {}E(Q_{})", pc.p(), pc.p()));
                    break;
                }
                Err(PadicError::PrecisionExhausted) => {
                    transcript.push(format!("depth {depth}, precision {w}: precision exhausted"));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Err(PadicError::PolicyExhausted { depth_max: policy.depth_max })
}

fn finite(a: i64) -> Option<i64> {
    (a != i64::MAX).then_some(a)
}

fn fmt_finite(a: i64) -> String {
    finite(a).map_or_else(|| "all".to_string(), |a| a.to_string())
}

fn describe(p: &CurvePointPadic) -> String {
    match p {
        CurvePointPadic::Infinity => "O".to_string(),
        CurvePointPadic::Affine { x, y } => format!("({x}, {y})"),
    }
}

/// Certificate for a rational point: `P = P1`, so the difference is `O`.
pub fn approximate_rational_point(
    pc: &PadicCurve,
    x: &BigRational,
    y: &BigRational,
    precision: u32,
) -> Result<ApproximationCertificate, PadicError> {
    check_ordinary(pc)?;
    let c = pc.curve();
    let [a1, a2, a3, a4, a6] = c.coefficients().map(|a| BigRational::from_integer(BigInt::from(a)));
    if y * y + &a1 * x * y + &a3 * y != ((x + &a2) * x + &a4) * x + &a6 {
        return Err(PadicError::NotOnCurve);
    }
    if (BigRational::from_integer(BigInt::from(2)) * y + &a1 * x + &a3).is_zero() {
        return Err(PadicError::TwoTorsion);
    }
    let w = precision as i64;
    let p1 = CurvePointPadic::Affine {
        x: PadicNumber::from_rational(pc.p(), x, w),
        y: PadicNumber::from_rational(pc.p(), y, w),
    };
    let disc = y_discriminant_rational(c, x);
    Ok(ApproximationCertificate {
        label: c.label.clone(),
        curve: c.coefficients(),
        p: pc.p(),
        input_point: p1.clone(),
        input_rational: Some([rational_string(x), rational_string(y)]),
        x: rational_string(x),
        quad_disc: rational_string(&disc),
        quad_trivial: is_rational_square(&disc),
        depth: 0,
        working_precision: precision,
        lifted_point: p1,
        difference: CurvePointPadic::Infinity,
        witness: CurvePointPadic::Infinity,
        level: None,
        agreement: None,
        verified: true,
        transcript: vec!["P1 is rational: P = P1, difference O = p·O".to_string()],
    })
}

/// Re-checks a certificate using only its own fields.
pub fn verify_certificate(cert: &ApproximationCertificate) -> Result<bool, PadicError> {
    let curve = WeierstrassCurve::new(cert.label.clone(), cert.curve).map_err(|e| PadicError::Curve(e.to_string()))?;
    let pc = PadicCurve::new(&curve, cert.p)?;
    let x = parse_rational(&cert.x)?;
    let disc = parse_rational(&cert.quad_disc)?;
    if disc != y_discriminant_rational(&curve, &x) || cert.quad_trivial != is_rational_square(&disc) {
        return Ok(false);
    }
    let CurvePointPadic::Affine { x: x1, y: y1 } = &cert.input_point else {
        return Ok(false);
    };
    if !pc.is_on_curve(&cert.input_point) || pc.two_torsion_form(x1, y1).is_zero() {
        return Ok(false);
    }
    if let Some([xr, yr]) = &cert.input_rational {
        let (xr, yr) = (parse_rational(xr)?, parse_rational(yr)?);
        let fresh = approximate_rational_point(&pc, &xr, &yr, cert.working_precision)?;
        return Ok(xr == x && fresh.input_point == cert.input_point && cert.difference.is_infinity());
    }
    // x ≡ x1 mod p^depth
    let xp = PadicNumber::from_rational(cert.p, &x, x1.abs_prec());
    let dx = xp.sub(x1);
    if !(dx.is_zero() || dx.valuation() >= cert.depth as i64) {
        return Ok(false);
    }
    let w = cert.working_precision;
    let Some(lifted) = lift_y(&pc, &x, y1, w) else {
        return Ok(false);
    };
    if lifted != cert.lifted_point {
        return Ok(false);
    }
    let diff = pc.sub(&lifted, &cert.input_point.truncate(w as i64))?;
    if diff != cert.difference {
        return Ok(false);
    }
    let pq = match pc.mul(cert.p as i64, &cert.witness) {
        Ok(pq) => pq,
        Err(PadicError::PrecisionExhausted | PadicError::DivisionByZero) => return Ok(false),
        Err(e) => return Err(e),
    };
    let (level, _) = pc.level(&pq, &diff);
    Ok(level >= DIVISION_LEVEL && cert.verified)
}

/// A point of `E(Z_p)` that is not 2-torsion modulo `p`, with `precision`
/// random digits in its abscissa.
pub fn random_point(pc: &PadicCurve, seed: u64, precision: u32) -> Result<CurvePointPadic, PadicError> {
    let p = pc.p();
    let precision = precision.max(1);
    // residues x0 with a y-discriminant that is a nonzero square mod p
    let admissible: Vec<u32> = (0..p)
        .filter(|&x0| {
            let d = pc.y_discriminant(&PadicNumber::from_i64(p, x0 as i64, 1));
            !d.is_zero() && d.is_square()
        })
        .collect();
    if admissible.is_empty() {
        return Err(PadicError::NoAdmissiblePoint);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = p_pow(p, precision);
    let first = admissible[rng.gen_range(0..admissible.len())];
    let digits: Vec<u32> = std::iter::once(first).chain((1..precision).map(|_| rng.gen_range(0..p))).collect();
    let xi = digits.iter().rev().fold(BigInt::zero(), |acc, &d| acc * BigInt::from(p) + BigInt::from(d));
    let x = PadicNumber::from_integer(p, &(xi % &m), precision as i64);
    let mut pts = pc.points_with_x(&x);
    debug_assert_eq!(pts.len(), 2);
    Ok(pts.swap_remove(rng.gen_range(0..pts.len())))
}

/// Outcome of the necessary condition `p - 1 <= [F~ : Q]` for `(∗_v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarConditionReport {
    pub p: u64,
    pub cyclotomic_degree: u64,
    pub closure_degree: u64,
    /// `"possible"` or `"impossible"`.
    pub verdict: String,
    pub inequality: String,
    pub ramification_clause: String,
}

pub fn star_condition_report(c: &WeierstrassCurve, p: u64, closure_degree: u64) -> Result<StarConditionReport, PadicError> {
    if p == 2 || !crate::linalg::is_prime(p) {
        return Err(PadicError::InvalidPrime(p as u32));
    }
    if !c.has_good_reduction(p) {
        return Err(PadicError::NotOrdinary { p: p as u32, reduction: "bad".into() });
    }
    let cyc = p - 1;
    let possible = cyc <= closure_degree;
    let (verdict, rel) = if possible { ("possible", "<=") } else { ("impossible", ">") };
    Ok(StarConditionReport {
        p,
        cyclotomic_degree: cyc,
        closure_degree,
        verdict: verdict.to_string(),
        inequality: format!("[Q_{p}(mu_{p}):Q_{p}] = {cyc} {rel} {closure_degree}"),
        ramification_clause: "NOT-EVALUATED".to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn curve() -> PadicCurve {
        PadicCurve::new(&WeierstrassCurve::short("e", 1, 1).unwrap(), 5).unwrap()
    }

    #[test]
    fn star_examples() {
        let e = WeierstrassCurve::short("e", 1, 1).unwrap();
        assert_eq!(star_condition_report(&e, 7, 1).unwrap().verdict, "impossible");
        assert_eq!(star_condition_report(&e, 3, 2).unwrap().verdict, "possible");
        assert_eq!(star_condition_report(&e, 5, 10).unwrap().verdict, "possible");
    }

    #[test]
    fn random_point_is_on_curve() {
        let pc = curve();
        for seed in 0..5 {
            let p = random_point(&pc, seed, 20).unwrap();
            assert!(pc.is_on_curve(&p));
            assert_eq!(p, random_point(&pc, seed, 20).unwrap());
        }
    }

    #[test]
    fn certificate_round_trip() {
        let pc = curve();
        let p1 = random_point(&pc, 7, 40).unwrap();
        let cert = approximate_point(&pc, &p1, &DepthPolicy::default()).unwrap();
        assert!(cert.verified);
        assert!(cert.depth <= 6, "{cert:?}");
        let json = serde_json::to_string(&cert).unwrap();
        let back: ApproximationCertificate = serde_json::from_str(&json).unwrap();
        assert!(verify_certificate(&back).unwrap());
    }

    #[test]
    fn rational_input() {
        let pc = curve();
        let one = BigRational::one();
        let cert = approximate_rational_point(&pc, &BigRational::zero(), &one, 10).unwrap();
        assert!(cert.quad_trivial && cert.difference.is_infinity());
        assert!(verify_certificate(&cert).unwrap());
    }

    #[test]
    fn no_admissible_point() {
        // every point of y^2 = x^3 - x over F_3 is 2-torsion
        let pc = PadicCurve::new(&WeierstrassCurve::short("cm", -1, 0).unwrap(), 3).unwrap();
        assert_eq!(random_point(&pc, 0, 10).unwrap_err(), PadicError::NoAdmissiblePoint);
    }

    #[test]
    fn rational_strings() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(rational_string(&q), "-3/2");
        assert_eq!(rational_string(&parse_rational(" 7 ").unwrap()), "7/1");
        for bad in ["", "1/0", "a/2", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn rejections() {
        let cm = PadicCurve::new(&WeierstrassCurve::short("cm", -1, 0).unwrap(), 5).unwrap();
        let t = cm.integral_point(0, 0, 10).unwrap();
        assert_eq!(approximate_point(&cm, &t, &DepthPolicy::default()).unwrap_err(), PadicError::TwoTorsion);
        let ss = PadicCurve::new(&WeierstrassCurve::short("ss", 0, 1).unwrap(), 5).unwrap();
        let q = ss.integral_point(2, 3, 10).unwrap();
        assert!(matches!(approximate_point(&ss, &q, &DepthPolicy::default()), Err(PadicError::NotOrdinary { .. })));
    }
}
