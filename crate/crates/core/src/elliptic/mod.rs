//! Elliptic curves over `Q` in long Weierstrass form
//! `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.

mod divpoly;
mod poly;
mod scan;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use divpoly::{division_polynomial, DivisionPolynomial, DivisionPolynomials};
pub use poly::IntPoly;
pub use scan::{
    ordinary_density_sample, primes_up_to, theorem_a_scan, theorem_a_scan_with_degree, DensitySample, PrimeVerdict,
    VerdictReason,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllipticError {
    #[error("curve {0:?} is singular (discriminant 0)")]
    Singular(String),
    #[error("{p} is not prime")]
    NotPrime { p: u64 },
    #[error("curve has bad reduction at {p}")]
    BadReduction { p: u64 },
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    GoodOrdinary,
    GoodSupersingular,
    Bad,
}

impl Reduction {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::GoodOrdinary => "good-ordinary",
            Self::GoodSupersingular => "good-supersingular",
            Self::Bad => "bad",
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A nonsingular Weierstrass model with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeierstrassCurve {
    pub label: String,
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
}

impl WeierstrassCurve {
    pub fn new(label: impl Into<String>, [a1, a2, a3, a4, a6]: [i64; 5]) -> Result<Self, EllipticError> {
        let c = Self { label: label.into(), a1, a2, a3, a4, a6 };
        if c.discriminant() == 0 {
            return Err(EllipticError::Singular(c.label));
        }
        Ok(c)
    }

    /// `y^2 = x^3 + a x + b`.
    pub fn short(label: impl Into<String>, a: i64, b: i64) -> Result<Self, EllipticError> {
        Self::new(label, [0, 0, 0, a, b])
    }

    pub fn coefficients(&self) -> [i64; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.a6]
    }

    pub fn b2(&self) -> i128 {
        let (a1, a2) = (self.a1 as i128, self.a2 as i128);
        a1 * a1 + 4 * a2
    }

    pub fn b4(&self) -> i128 {
        let (a1, a3, a4) = (self.a1 as i128, self.a3 as i128, self.a4 as i128);
        2 * a4 + a1 * a3
    }

    pub fn b6(&self) -> i128 {
        let (a3, a6) = (self.a3 as i128, self.a6 as i128);
        a3 * a3 + 4 * a6
    }

    pub fn b8(&self) -> i128 {
        let [a1, a2, a3, a4, a6] = self.coefficients().map(|a| a as i128);
        a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    }

    pub fn discriminant(&self) -> i128 {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    }

    /// `4 b8 = b2 b6 - b4^2`.
    pub fn invariants_consistent(&self) -> bool {
        4 * self.b8() == self.b2() * self.b6() - self.b4() * self.b4()
    }

    /// The model obtained by `x = x' + r`.
    pub fn translate_x(&self, r: i64) -> Result<Self, EllipticError> {
        let [a1, a2, a3, a4, a6] = self.coefficients();
        Self::new(
            format!("{}[x+{r}]", self.label),
            [a1, a2 + 3 * r, a3 + r * a1, a4 + 2 * r * a2 + 3 * r * r, a6 + r * a4 + r * r * a2 + r * r * r],
        )
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        self.discriminant() % p as i128 != 0
    }

    /// `#E(F_p)` by running over `x` and counting roots of the quadratic in
    /// `y` through its discriminant `(a1 x + a3)^2 + 4(x^3 + a2 x^2 + a4 x + a6)`.
    pub fn count_points(&self, p: u64) -> Result<u64, EllipticError> {
        check_prime(p)?;
        if !self.has_good_reduction(p) {
            return Err(EllipticError::BadReduction { p });
        }
        if p == 2 {
            return Ok(self.count_points_naive(2));
        }
        let mut is_square = vec![false; p as usize];
        for y in 0..p {
            is_square[(y * y % p) as usize] = true;
        }
        let [a1, a2, a3, a4, a6] = self.coefficients().map(|a| a.rem_euclid(p as i64) as u64);
        let mut count = 1;
        for x in 0..p {
            let l = (a1 * x + a3) % p;
            let cubic = (((x + a2) % p * x % p + a4) % p * x % p + a6) % p;
            let d = (l * l + 4 * cubic) % p;
            count += match (d, is_square[d as usize]) {
                (0, _) => 1,
                (_, true) => 2,
                _ => 0,
            };
        }
        Ok(count)
    }

    /// `#E(F_p)` by testing every affine pair `(x, y)`.
    pub fn count_points_naive(&self, p: u64) -> u64 {
        let [a1, a2, a3, a4, a6] = self.coefficients().map(|a| a.rem_euclid(p as i64) as u64);
        let mut count = 1;
        for x in 0..p {
            let rhs = (((x + a2) % p * x % p + a4) % p * x % p + a6) % p;
            for y in 0..p {
                let lhs = (y * y + (a1 * x + a3) % p * y) % p;
                if lhs == rhs {
                    count += 1;
                }
            }
        }
        count
    }

    /// `a_p = p + 1 - #E(F_p)`.
    pub fn ap(&self, p: u64) -> Result<i64, EllipticError> {
        Ok(p as i64 + 1 - self.count_points(p)? as i64)
    }

    /// Bad iff `p` divides the discriminant of this model.
    pub fn reduction_type(&self, p: u64) -> Result<Reduction, EllipticError> {
        check_prime(p)?;
        if !self.has_good_reduction(p) {
            return Ok(Reduction::Bad);
        }
        let ap = self.ap(p)?;
        Ok(if ap.rem_euclid(p as i64) == 0 { Reduction::GoodSupersingular } else { Reduction::GoodOrdinary })
    }

    /// Whether `(x, y)` lies on the curve (exact integer check).
    pub fn contains_integral_point(&self, x: i64, y: i64) -> bool {
        let [a1, a2, a3, a4, a6] = self.coefficients().map(|a| a as i128);
        let (x, y) = (x as i128, y as i128);
        y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6
    }

    /// `label,a1,a2,a3,a4,a6`.
    pub fn to_csv(&self) -> String {
        format!("{},{},{},{},{},{}", self.label, self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{},{},{},{},{}]", self.label, self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

impl FromStr for WeierstrassCurve {
    type Err = EllipticError;

    /// One CSV record, `label,a1,a2,a3,a4,a6`, no spaces.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_record(s, 1)
    }
}

fn parse_record(s: &str, line: usize) -> Result<WeierstrassCurve, EllipticError> {
    let err = |message: String| EllipticError::Csv { line, message };
    let fields: Vec<&str> = s.split(',').collect();
    if fields.len() != 6 {
        return Err(err(format!("expected 6 fields, found {}", fields.len())));
    }
    let label = fields[0];
    if label.is_empty() || label.chars().any(char::is_whitespace) {
        return Err(err(format!("invalid label {label:?}")));
    }
    let mut a = [0i64; 5];
    for (slot, f) in a.iter_mut().zip(&fields[1..]) {
        *slot = f.parse().map_err(|_| err(format!("invalid integer {f:?}")))?;
    }
    WeierstrassCurve::new(label, a).map_err(|e| err(e.to_string()))
}

/// Parses a curve file. Blank lines, lines starting with `#`, and a
/// leading `label,a1,...` header are skipped; line numbers are 1-based.
pub fn parse_curves(text: &str) -> Result<Vec<WeierstrassCurve>, EllipticError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') || (out.is_empty() && line.starts_with("label,")) {
            continue;
        }
        out.push(parse_record(line, i + 1)?);
    }
    Ok(out)
}

/// The curve corpus shipped with the crate (`data/curves.csv`).
pub const BUNDLED_CORPUS: &str = include_str!("../../../../data/curves.csv");

pub fn bundled_corpus() -> Vec<WeierstrassCurve> {
    parse_curves(BUNDLED_CORPUS).expect("bundled corpus parses")
}

pub(crate) fn check_prime(p: u64) -> Result<(), EllipticError> {
    if crate::linalg::is_prime(p) {
        Ok(())
    } else {
        Err(EllipticError::NotPrime { p })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// `-16(4a^3 + 27b^2)` for `y^2 = x^3 + ax + b`.
    fn short_disc(a: i64, b: i64) -> i128 {
        let (a, b) = (a as i128, b as i128);
        -16 * (4 * a * a * a + 27 * b * b)
    }

    #[test]
    fn discriminants() {
        assert_eq!(WeierstrassCurve::short("e", 1, 1).unwrap().discriminant(), short_disc(1, 1));
        assert_eq!(short_disc(1, 1), -496);
        assert_eq!(WeierstrassCurve::short("e", -1, 0).unwrap().discriminant(), 64);
        let e37 = WeierstrassCurve::new("37a1", [0, 0, 1, -1, 0]).unwrap();
        assert_eq!(e37.discriminant(), 37);
        // completing the square: y^2 + y = x^3 - x  ~  Y^2 = X^3 - 16 X + 16 with X = 4x, Y = 8y + 4
        assert_eq!(short_disc(-16, 16), 37 * 4096);
        assert!(WeierstrassCurve::short("sing", 0, 0).is_err());
    }

    #[test]
    fn ap_examples() {
        let e = WeierstrassCurve::short("e", 1, 1).unwrap();
        assert_eq!(e.count_points(5).unwrap(), 9);
        assert_eq!(e.ap(5).unwrap(), -3);
        assert_eq!(e.reduction_type(5).unwrap(), Reduction::GoodOrdinary);
        let f = WeierstrassCurve::short("f", 0, 1).unwrap();
        assert_eq!(f.count_points(5).unwrap(), 6);
        assert_eq!(f.ap(5).unwrap(), 0);
        assert_eq!(f.reduction_type(5).unwrap(), Reduction::GoodSupersingular);
        let e37 = WeierstrassCurve::new("37a1", [0, 0, 1, -1, 0]).unwrap();
        assert_eq!(e37.reduction_type(37).unwrap(), Reduction::Bad);
        assert_eq!(e37.ap(37).unwrap_err(), EllipticError::BadReduction { p: 37 });
        assert_eq!(e37.ap(9).unwrap_err(), EllipticError::NotPrime { p: 9 });
    }

    #[test]
    fn csv_parsing() {
        let text = "label,a1,a2,a3,a4,a6\n# comment\n37a1,0,0,1,-1,0\n\n11a3,0,-1,1,0,0\r\n";
        let curves = parse_curves(text).unwrap();
        assert_eq!(curves.len(), 2);
        assert_eq!(curves[1].to_csv(), "11a3,0,-1,1,0,0");
        let err = parse_curves("37a1,0,0,1,-1,0\nbad,1,2,x,4,5\n").unwrap_err();
        assert_eq!(err, EllipticError::Csv { line: 2, message: "invalid integer \"x\"".into() });
        assert!(matches!(parse_curves("a,0,0,0,0,0").unwrap_err(), EllipticError::Csv { line: 1, .. }));
        assert!(matches!(parse_curves("a, 0,0,0,1,1").unwrap_err(), EllipticError::Csv { line: 1, .. }));
    }

    proptest! {
        #[test]
        fn counts_agree_and_hasse(a in -20i64..20, b in -20i64..20, pi in 0usize..24) {
            let primes = primes_up_to(100);
            let p = primes[pi];
            prop_assume!(4 * a * a * a + 27 * b * b != 0);
            let e = WeierstrassCurve::short("e", a, b).unwrap();
            prop_assume!(e.has_good_reduction(p));
            prop_assert_eq!(e.count_points(p).unwrap(), e.count_points_naive(p));
            let ap = e.ap(p).unwrap();
            prop_assert!((ap * ap) as u64 <= 4 * p);
            prop_assert!(e.invariants_consistent());
        }

        #[test]
        fn translation_preserves_reduction(a in -20i64..20, b in -20i64..20, r in -5i64..5, pi in 1usize..24) {
            prop_assume!(4 * a * a * a + 27 * b * b != 0);
            let p = primes_up_to(100)[pi];
            let e = WeierstrassCurve::short("e", a, b).unwrap();
            let t = e.translate_x(r).unwrap();
            prop_assert_eq!(e.discriminant(), t.discriminant());
            prop_assert_eq!(e.reduction_type(p).unwrap(), t.reduction_type(p).unwrap());
            if e.has_good_reduction(p) {
                prop_assert_eq!(e.ap(p).unwrap(), t.ap(p).unwrap());
            }
        }
    }
}
