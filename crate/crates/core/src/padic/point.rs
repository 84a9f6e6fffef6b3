use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::hensel::zp_roots;
use super::number::{p_pow, PadicNumber};
use super::PadicError;
use crate::elliptic::{DivisionPolynomials, IntPoly, WeierstrassCurve};

/// A point of `E(Q_p)` at finite precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurvePointPadic {
    Infinity,
    Affine { x: PadicNumber, y: PadicNumber },
}

impl CurvePointPadic {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn x(&self) -> Option<&PadicNumber> {
        match self {
            Self::Affine { x, .. } => Some(x),
            Self::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&PadicNumber> {
        match self {
            Self::Affine { y, .. } => Some(y),
            Self::Infinity => None,
        }
    }

    /// Smallest absolute precision of the coordinates (`None` at infinity).
    pub fn precision(&self) -> Option<i64> {
        match self {
            Self::Affine { x, y } => Some(x.abs_prec().min(y.abs_prec())),
            Self::Infinity => None,
        }
    }

    pub fn truncate(&self, abs: i64) -> Self {
        match self {
            Self::Affine { x, y } => Self::Affine { x: x.truncate(abs), y: y.truncate(abs) },
            Self::Infinity => Self::Infinity,
        }
    }
}

/// A Weierstrass curve viewed over `Q_p`, with the multiplication-by-`p`
/// map precomputed.
#[derive(Debug, Clone)]
pub struct PadicCurve {
    curve: WeierstrassCurve,
    p: u32,
    a: [PadicNumber; 5],
    /// `x(pQ) = phi(x) / psi_sq(x)`.
    phi: IntPoly,
    psi_sq: IntPoly,
}

impl PadicCurve {
    pub fn new(curve: &WeierstrassCurve, p: u32) -> Result<Self, PadicError> {
        if p == 2 || !crate::linalg::is_prime(p as u64) || p > 97 {
            return Err(PadicError::InvalidPrime(p));
        }
        let a = curve.coefficients().map(|c| PadicNumber::constant(p, c));
        let table = DivisionPolynomials::new(curve, p as usize + 1);
        let (phi, psi_sq) = table.multiplication_map(p as usize);
        Ok(Self { curve: curve.clone(), p, a, phi, psi_sq })
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    fn a(&self, i: usize) -> &PadicNumber {
        &self.a[i]
    }

    /// `a1 x + a3`.
    pub fn linear_term(&self, x: &PadicNumber) -> PadicNumber {
        self.a(0).mul(x).add(self.a(2))
    }

    /// `x^3 + a2 x^2 + a4 x + a6`.
    pub fn cubic(&self, x: &PadicNumber) -> PadicNumber {
        x.add(self.a(1)).mul(x).add(self.a(3)).mul(x).add(self.a(4))
    }

    /// Discriminant of the `y`-quadratic: `(a1 x + a3)^2 + 4 (x^3 + ...)`.
    pub fn y_discriminant(&self, x: &PadicNumber) -> PadicNumber {
        self.linear_term(x).square().add(&self.cubic(x).mul_int(4))
    }

    /// `y^2 + a1 xy + a3 y - (x^3 + a2 x^2 + a4 x + a6)`.
    pub fn residual(&self, pt: &CurvePointPadic) -> Option<PadicNumber> {
        match pt {
            CurvePointPadic::Infinity => None,
            CurvePointPadic::Affine { x, y } => Some(y.add(&self.linear_term(x)).mul(y).sub(&self.cubic(x))),
        }
    }

    pub fn is_on_curve(&self, pt: &CurvePointPadic) -> bool {
        self.residual(pt).is_none_or(|r| r.is_zero())
    }

    /// Points with abscissa `x`: two, one (`x` a 2-torsion abscissa), or none.
    pub fn points_with_x(&self, x: &PadicNumber) -> Vec<CurvePointPadic> {
        let b = self.linear_term(x);
        let d = self.y_discriminant(x);
        let half = PadicNumber::constant(self.p, 2).inverse().expect("p odd");
        if d.is_zero() {
            return vec![CurvePointPadic::Affine { x: x.clone(), y: b.neg().mul(&half) }];
        }
        match d.sqrt() {
            Ok(roots) => roots
                .iter()
                .map(|r| CurvePointPadic::Affine { x: x.clone(), y: r.sub(&b).mul(&half) })
                .collect(),
            Err(_) => Vec::new(),
        }
    }

    pub fn neg(&self, pt: &CurvePointPadic) -> CurvePointPadic {
        match pt {
            CurvePointPadic::Infinity => CurvePointPadic::Infinity,
            CurvePointPadic::Affine { x, y } => {
                CurvePointPadic::Affine { x: x.clone(), y: y.neg().sub(&self.linear_term(x)) }
            }
        }
    }

    /// `2y + a1 x + a3`, which vanishes exactly on 2-torsion points.
    pub fn two_torsion_form(&self, x: &PadicNumber, y: &PadicNumber) -> PadicNumber {
        y.mul_int(2).add(&self.linear_term(x))
    }

    /// Chord-and-tangent addition. Inputs that are identical (or exact
    /// negatives) as data are doubled (or cancel); distinct inputs whose
    /// abscissae agree to the available precision cannot be added soundly.
    pub fn add(&self, p1: &CurvePointPadic, p2: &CurvePointPadic) -> Result<CurvePointPadic, PadicError> {
        let (x1, y1, x2, y2) = match (p1, p2) {
            (CurvePointPadic::Infinity, q) | (q, CurvePointPadic::Infinity) => return Ok(q.clone()),
            (CurvePointPadic::Affine { x: x1, y: y1 }, CurvePointPadic::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let lambda = if p1 == p2 {
            let den = self.two_torsion_form(x1, y1);
            let num = x1.square().mul_int(3).add(&self.a(1).mul(x1).mul_int(2)).add(self.a(3)).sub(&self.a(0).mul(y1));
            num.div(&den)?
        } else if *p2 == self.neg(p1) {
            return Ok(CurvePointPadic::Infinity);
        } else {
            let dx = x2.sub(x1);
            if dx.is_zero() {
                return Err(PadicError::PrecisionExhausted);
            }
            y2.sub(y1).div(&dx)?
        };
        let nu = y1.sub(&lambda.mul(x1));
        let x3 = lambda.square().add(&self.a(0).mul(&lambda)).sub(self.a(1)).sub(x1).sub(x2);
        let y3 = lambda.add(self.a(0)).mul(&x3).neg().sub(&nu).sub(self.a(2));
        Ok(CurvePointPadic::Affine { x: x3, y: y3 })
    }

    pub fn sub(&self, p1: &CurvePointPadic, p2: &CurvePointPadic) -> Result<CurvePointPadic, PadicError> {
        self.add(p1, &self.neg(p2))
    }

    pub fn mul(&self, n: i64, pt: &CurvePointPadic) -> Result<CurvePointPadic, PadicError> {
        let base = if n < 0 { self.neg(pt) } else { pt.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = CurvePointPadic::Infinity;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &pow)?;
            }
            k >>= 1;
            if k > 0 {
                pow = self.add(&pow, &pow)?;
            }
        }
        Ok(acc)
    }

    /// Number of digits to which two points agree, or `None` if they differ
    /// at the common precision. Infinity agrees only with infinity.
    pub fn agreement(&self, a: &CurvePointPadic, b: &CurvePointPadic) -> Option<i64> {
        match (a, b) {
            (CurvePointPadic::Infinity, CurvePointPadic::Infinity) => Some(i64::MAX),
            (CurvePointPadic::Affine { x: x1, y: y1 }, CurvePointPadic::Affine { x: x2, y: y2 }) => {
                let dx = x1.sub(x2);
                let dy = y1.sub(y2);
                (dx.is_zero() && dy.is_zero()).then(|| dx.valuation().min(dy.valuation()))
            }
            _ => None,
        }
    }

    /// Filtration index `n` with `P ∈ E_n(Q_p)`: `0` for integral
    /// points, `-v(x)/2` in the formal group. `None` if precision cannot tell.
    pub fn filtration(&self, pt: &CurvePointPadic) -> Option<i64> {
        match pt {
            CurvePointPadic::Infinity => Some(i64::MAX),
            CurvePointPadic::Affine { x, .. } if x.is_zero() => (x.abs_prec() >= 0).then_some(0),
            CurvePointPadic::Affine { x, .. } => Some((-x.valuation()).max(0) / 2),
        }
    }

    /// A certified lower bound on `n` with `a - b ∈ E_n(Q_p)`, and whether
    /// it is sharp. Integral points are compared coordinatewise, points of
    /// the formal group through the parameter `t = -x/y`.
    pub fn level(&self, a: &CurvePointPadic, b: &CurvePointPadic) -> (i64, bool) {
        let (Some(fa), Some(fb)) = (self.filtration(a), self.filtration(b)) else {
            return (0, false);
        };
        if fa != fb {
            return (fa.min(fb), true);
        }
        let diff = |u: &PadicNumber, w: &PadicNumber| {
            let d = u.sub(w);
            (d.valuation(), !d.is_zero())
        };
        match (a, b) {
            (CurvePointPadic::Infinity, _) | (_, CurvePointPadic::Infinity) => (i64::MAX, false),
            (CurvePointPadic::Affine { x: x1, y: y1 }, CurvePointPadic::Affine { x: x2, y: y2 }) if fa == 0 => {
                let (vx, sx) = diff(x1, x2);
                let (vy, sy) = diff(y1, y2);
                match vx.cmp(&vy) {
                    std::cmp::Ordering::Less => (vx.max(0), sx),
                    std::cmp::Ordering::Greater => (vy.max(0), sy),
                    std::cmp::Ordering::Equal => (vx.max(0), sx || sy),
                }
            }
            (CurvePointPadic::Affine { x: x1, y: y1 }, CurvePointPadic::Affine { x: x2, y: y2 }) => {
                let t = |x: &PadicNumber, y: &PadicNumber| x.div(y).map(|q| q.neg());
                match (t(x1, y1), t(x2, y2)) {
                    (Ok(t1), Ok(t2)) => {
                        let (v, sharp) = diff(&t1, &t2);
                        (v.max(fa), sharp && v >= fa)
                    }
                    _ => (fa, false),
                }
            }
        }
    }

    /// Candidate abscissae of `Q` with `x(pQ) = x`: the roots in `Q_p` of
    /// `phi(X) - x psi_p(X)^2`, found separately for `v(X) >= 0` and (via the
    /// reversed polynomial) `v(X) < 0`.
    fn preimage_abscissae(&self, x: &PadicNumber) -> (Vec<PadicNumber>, bool) {
        let p = self.p;
        let (scale_phi, xu, a) = if x.valuation() >= 0 {
            let a = x.abs_prec();
            (0u32, x.residue(a.max(0) as u32).unwrap_or_default(), a)
        } else {
            (x.valuation().unsigned_abs() as u32, x.unit().clone(), x.rel_prec() as i64)
        };
        if a <= 0 {
            return (Vec::new(), true);
        }
        let a = a as u32;
        let ps = p_pow(p, scale_phi);
        let deg = self.phi.degree().expect("nonzero");
        let g: Vec<BigInt> = (0..=deg).map(|i| &ps * self.phi.coeff(i) - &xu * self.psi_sq.coeff(i)).collect();
        let mut out = Vec::new();
        let integral = zp_roots(&g, p, a, None);
        let mut exhausted = integral.exhausted;
        for (r, k) in integral.roots {
            out.push(PadicNumber::from_integer(p, &r, k as i64));
        }
        let rev: Vec<BigInt> = g.iter().rev().cloned().collect();
        let polar = zp_roots(&rev, p, a, Some(0));
        exhausted |= polar.exhausted;
        for (z, k) in polar.roots {
            let z = PadicNumber::from_integer(p, &z, k as i64);
            match z.inverse() {
                Ok(x) => out.push(x),
                Err(_) => exhausted = true,
            }
        }
        (out, exhausted)
    }

    /// Some `Q` with `pQ = P` to the precision of `P`, if one exists in
    /// `E(Q_p)`. Infinity divides to infinity.
    pub fn divide_by_p(&self, pt: &CurvePointPadic) -> Result<Option<CurvePointPadic>, PadicError> {
        Ok(self.divide_by_p_detailed(pt)?.map(|d| d.witness))
    }

    /// Searches the preimages of `x(P)` under multiplication by `p` for a
    /// `Q` with `P - pQ ∈ E_2(Q_p) = pE_1(Q_p)`, which certifies `P ∈ pE(Q_p)`.
    /// Of the qualifying candidates the closest to `P` is returned. `None`
    /// is returned only when every candidate is excluded at known precision.
    pub fn divide_by_p_detailed(&self, pt: &CurvePointPadic) -> Result<Option<Division>, PadicError> {
        let CurvePointPadic::Affine { x, .. } = pt else {
            return Ok(Some(Division { witness: CurvePointPadic::Infinity, level: i64::MAX, agreement: i64::MAX, candidates: 0 }));
        };
        let (xs, mut inconclusive) = self.preimage_abscissae(x);
        let mut candidates = 0;
        let mut best: Option<Division> = None;
        for xq in &xs {
            for q in self.points_with_x(xq) {
                candidates += 1;
                let pq = match self.mul(self.p as i64, &q) {
                    Ok(r) => r,
                    Err(PadicError::DivisionByZero | PadicError::PrecisionExhausted) => {
                        inconclusive = true;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let (level, sharp) = self.level(&pq, pt);
                if level >= DIVISION_LEVEL {
                    if best.as_ref().is_none_or(|b| level > b.level) {
                        let agreement = self.agreement(&pq, pt).unwrap_or(level);
                        best = Some(Division { witness: q, level, agreement, candidates: 0 });
                    }
                } else if !sharp {
                    inconclusive = true;
                }
            }
        }
        match best {
            Some(mut d) => {
                d.candidates = candidates;
                Ok(Some(d))
            }
            None if inconclusive => Err(PadicError::PrecisionExhausted),
            None => Ok(None),
        }
    }

    /// Whether `P ∈ pE(Q_p)`.
    pub fn in_pe(&self, pt: &CurvePointPadic) -> Result<bool, PadicError> {
        Ok(self.divide_by_p(pt)?.is_some())
    }

    /// The affine point with the given exact integer coordinates.
    pub fn integral_point(&self, x: i64, y: i64, abs: i64) -> Result<CurvePointPadic, PadicError> {
        if !self.curve.contains_integral_point(x, y) {
            return Err(PadicError::NotOnCurve);
        }
        Ok(CurvePointPadic::Affine { x: PadicNumber::from_i64(self.p, x, abs), y: PadicNumber::from_i64(self.p, y, abs) })
    }
}

/// `P - pQ ∈ E_2(Q_p)` suffices for `P ∈ pE(Q_p)` when `p` is odd.
pub const DIVISION_LEVEL: i64 = 2;

/// Result of a successful division by `p`.
#[derive(Debug, Clone)]
pub struct Division {
    pub witness: CurvePointPadic,
    /// Certified `n` with `P - p · witness ∈ E_n(Q_p)`.
    pub level: i64,
    /// Digits to which the coordinates of `p · witness` match the input.
    pub agreement: i64,
    pub candidates: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> PadicCurve {
        PadicCurve::new(&WeierstrassCurve::short("e", 1, 1).unwrap(), 5).unwrap()
    }

    #[test]
    fn points_with_x_examples() {
        let c = e();
        let pts = c.points_with_x(&PadicNumber::from_i64(5, 0, 10));
        assert_eq!(pts.len(), 2);
        let ys: Vec<_> = pts.iter().map(|p| p.y().unwrap().clone()).collect();
        assert!(ys.contains(&PadicNumber::from_i64(5, 1, 10)));
        assert!(ys.contains(&PadicNumber::from_i64(5, -1, 10)));
        for q in &pts {
            assert!(c.is_on_curve(q));
        }
        // y' + y'' = -(a1 x + a3)
        let s = ys[0].add(&ys[1]);
        assert!(s.approx_eq(&c.linear_term(&PadicNumber::from_i64(5, 0, 10)).neg()));
        // x = 1: x^3 + x + 1 = 3, a non-residue mod 5
        assert!(c.points_with_x(&PadicNumber::from_i64(5, 1, 10)).is_empty());
        // y^2 = x^3 - x at x = 1 is 2-torsion
        let cm = PadicCurve::new(&WeierstrassCurve::short("cm", -1, 0).unwrap(), 5).unwrap();
        assert_eq!(cm.points_with_x(&PadicNumber::from_i64(5, 1, 10)).len(), 1);
    }

    #[test]
    fn group_law_on_integral_points() {
        // y^2 + y = x^3 - x with P = (0, 0): 2P = (1, 0), 3P = (-1, -1)
        let c = PadicCurve::new(&WeierstrassCurve::new("37a1", [0, 0, 1, -1, 0]).unwrap(), 5).unwrap();
        let p = c.integral_point(0, 0, 20).unwrap();
        assert_eq!(c.mul(2, &p).unwrap(), c.integral_point(1, 0, 20).unwrap());
        assert!(c.agreement(&c.mul(3, &p).unwrap(), &c.integral_point(-1, -1, 20).unwrap()).is_some());
        assert!(c.mul(0, &p).unwrap().is_infinity());
        assert!(c.add(&p, &c.neg(&p)).unwrap().is_infinity());
        let q = c.mul(-7, &p).unwrap();
        assert!(c.add(&q, &c.mul(7, &p).unwrap()).unwrap().is_infinity());
    }

    #[test]
    fn divide_infinity() {
        let c = e();
        assert_eq!(c.divide_by_p(&CurvePointPadic::Infinity).unwrap(), Some(CurvePointPadic::Infinity));
        assert!(c.in_pe(&CurvePointPadic::Infinity).unwrap());
    }

    #[test]
    fn divide_constructed_multiple() {
        let c = e();
        // (0, 1) lies on y^2 = x^3 + x + 1
        let r = c.integral_point(0, 1, 24).unwrap();
        let p = c.mul(5, &r).unwrap();
        let q = c.divide_by_p(&p).unwrap().expect("divisible");
        let pq = c.mul(5, &q).unwrap();
        assert!(c.agreement(&pq, &p).is_some());
    }
}
