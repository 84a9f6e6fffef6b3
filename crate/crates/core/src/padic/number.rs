use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::PadicError;

/// Precision given to integer constants entering an arithmetic formula.
/// Results inherit the minimum precision of their operands, so constants
/// never limit a computation carried out at working precision below this.
pub const CONST_PREC: u32 = 256;

pub(crate) fn p_pow(p: u32, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Splits `n != 0` as `p^v * u` with `p ∤ u`.
fn split(p: u32, n: &BigInt) -> (i64, BigInt) {
    let pb = BigInt::from(p);
    let mut u = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = u.div_rem(&pb);
        if !r.is_zero() {
            return (v, u);
        }
        u = q;
        v += 1;
    }
}

/// An element of `Q_p` known modulo `p^abs`.
///
/// Nonzero values are `p^val * unit` with `unit` in `[1, p^rel)` prime to
/// `p`; the absolute precision is `val + rel`. A value indistinguishable
/// from zero is stored as `unit = 0, rel = 0`, with `val` its absolute
/// precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    p: u32,
    val: i64,
    unit: BigInt,
    rel: u32,
}

impl PadicNumber {
    /// `O(p^abs)`.
    pub fn zero(p: u32, abs: i64) -> Self {
        Self { p, val: abs, unit: BigInt::zero(), rel: 0 }
    }

    pub fn one(p: u32, rel: u32) -> Self {
        Self::from_integer(p, &BigInt::one(), rel as i64)
    }

    /// `n` modulo `p^abs`.
    pub fn from_integer(p: u32, n: &BigInt, abs: i64) -> Self {
        if n.is_zero() {
            return Self::zero(p, abs);
        }
        let (v, u) = split(p, n);
        Self::normalized(p, v, u, abs)
    }

    pub fn from_i64(p: u32, n: i64, abs: i64) -> Self {
        Self::from_integer(p, &BigInt::from(n), abs)
    }

    /// An integer constant at [`CONST_PREC`].
    pub fn constant(p: u32, n: i64) -> Self {
        Self::from_i64(p, n, CONST_PREC as i64)
    }

    /// `num/den` modulo `p^abs`.
    pub fn from_rational(p: u32, q: &BigRational, abs: i64) -> Self {
        if q.is_zero() {
            return Self::zero(p, abs);
        }
        let (vn, un) = split(p, q.numer());
        let (vd, ud) = split(p, q.denom());
        let val = vn - vd;
        if abs <= val {
            return Self::zero(p, abs);
        }
        let rel = (abs - val) as u32;
        let m = p_pow(p, rel);
        let inv = ud.mod_floor(&m).modinv(&m).expect("unit");
        Self { p, val, unit: (un * inv).mod_floor(&m), rel }
    }

    /// Raw constructor; `unit` may be any integer (reduced and stripped here),
    /// the value is `p^val * unit` modulo `p^abs`.
    pub fn normalized(p: u32, val: i64, unit: BigInt, abs: i64) -> Self {
        if unit.is_zero() || abs <= val {
            return Self::zero(p, abs);
        }
        let (k, u) = split(p, &unit);
        let val = val + k;
        if abs <= val {
            return Self::zero(p, abs);
        }
        let rel = (abs - val) as u32;
        let m = p_pow(p, rel);
        Self { p, val, unit: u.mod_floor(&m), rel }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Valuation of a nonzero value; for zero, the absolute precision.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn rel_prec(&self) -> u32 {
        self.rel
    }

    pub fn abs_prec(&self) -> i64 {
        self.val + self.rel as i64
    }

    pub fn is_integral(&self) -> bool {
        self.val >= 0
    }

    /// Leading base-`p` digit of the unit part (0 for zero).
    pub fn leading_digit(&self) -> u32 {
        (&self.unit % BigInt::from(self.p)).try_into().unwrap_or(0)
    }

    /// Reduces precision to at most `abs`.
    pub fn truncate(&self, abs: i64) -> Self {
        if abs >= self.abs_prec() {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero(self.p, abs);
        }
        Self::normalized(self.p, self.val, self.unit.clone(), abs)
    }

    /// The integer in `[0, p^n)` congruent to an integral value mod `p^n`.
    pub fn residue(&self, n: u32) -> Result<BigInt, PadicError> {
        if self.is_zero() && self.val >= 0 {
            return Ok(BigInt::zero());
        }
        if self.val < 0 {
            return Err(PadicError::NotIntegral);
        }
        if (n as i64) > self.abs_prec() {
            return Err(PadicError::PrecisionExhausted);
        }
        let m = p_pow(self.p, n);
        Ok((&self.unit * p_pow(self.p, self.val as u32)).mod_floor(&m))
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.p, o.p, "mixed primes");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let abs = self.abs_prec().min(o.abs_prec());
        match (self.is_zero(), o.is_zero()) {
            (true, _) => return o.truncate(abs),
            (_, true) => return self.truncate(abs),
            _ => {}
        }
        let v = self.val.min(o.val);
        if abs <= v {
            return Self::zero(self.p, abs);
        }
        let a = &self.unit * p_pow(self.p, (self.val - v) as u32);
        let b = &o.unit * p_pow(self.p, (o.val - v) as u32);
        Self::normalized(self.p, v, a + b, abs)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = p_pow(self.p, self.rel);
        Self { p: self.p, val: self.val, unit: (&m - &self.unit).mod_floor(&m), rel: self.rel }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        match (self.is_zero(), o.is_zero()) {
            (true, true) => Self::zero(self.p, self.val + o.val),
            (true, false) => Self::zero(self.p, self.val + o.val),
            (false, true) => Self::zero(self.p, self.val + o.val),
            (false, false) => {
                let rel = self.rel.min(o.rel);
                let m = p_pow(self.p, rel);
                Self { p: self.p, val: self.val + o.val, unit: (&self.unit * &o.unit).mod_floor(&m), rel }
            }
        }
    }

    /// Multiplication by an exact integer.
    pub fn mul_int(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero(self.p, CONST_PREC as i64);
        }
        if self.is_zero() {
            let (v, _) = split(self.p, &BigInt::from(k));
            return Self::zero(self.p, self.val + v);
        }
        let (v, u) = split(self.p, &BigInt::from(k));
        Self::normalized(self.p, self.val + v, &self.unit * u, self.abs_prec() + v)
    }

    pub fn inverse(&self) -> Result<Self, PadicError> {
        if self.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        let m = p_pow(self.p, self.rel);
        let inv = self.unit.modinv(&m).expect("unit");
        Ok(Self { p: self.p, val: -self.val, unit: inv, rel: self.rel })
    }

    pub fn div(&self, o: &Self) -> Result<Self, PadicError> {
        self.check(o);
        if o.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.p, self.val - o.val));
        }
        Ok(self.mul(&o.inverse()?))
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Both square roots, the one with the smaller leading digit first.
    /// Precision: relative precision is preserved for nonzero inputs; the
    /// root of `O(p^k)` is `O(p^{floor(k/2)})`.
    pub fn sqrt(&self) -> Result<[Self; 2], PadicError> {
        let p = self.p;
        if self.is_zero() {
            let z = Self::zero(p, self.val.div_euclid(2));
            return Ok([z.clone(), z]);
        }
        if self.val % 2 != 0 {
            return Err(PadicError::NoRoot);
        }
        let pb = BigInt::from(p);
        let u0: u64 = (&self.unit % &pb).try_into().expect("digit");
        let r0 = (1..p as u64).find(|r| r * r % p as u64 == u0).ok_or(PadicError::NoRoot)?;
        let m = p_pow(p, self.rel);
        let two_inv = BigInt::from(2).modinv(&m).expect("p odd");
        // Newton: r <- (r + u/r) / 2, quadratic convergence from a simple root
        let mut r = BigInt::from(r0);
        let mut digits = 1u32;
        while digits < self.rel {
            digits = (digits * 2).min(self.rel);
            let mk = p_pow(p, digits);
            let inv = r.modinv(&mk).expect("unit root");
            r = ((&r + &self.unit * inv) * &two_inv).mod_floor(&mk);
        }
        let r = r.mod_floor(&m);
        let a = Self { p, val: self.val / 2, unit: r, rel: self.rel };
        let b = a.neg();
        Ok(if a.leading_digit() <= b.leading_digit() { [a, b] } else { [b, a] })
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_ok()
    }

    /// Agreement to the common precision of both operands.
    pub fn approx_eq(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    /// Human-readable base-`p` expansion.
    pub fn to_digits(&self) -> String {
        if self.is_zero() {
            return format!("O({}^{})", self.p, self.val);
        }
        let pb = BigInt::from(self.p);
        let mut u = self.unit.clone();
        let mut terms = Vec::new();
        for i in 0..self.rel as i64 {
            let (q, d) = u.div_rem(&pb);
            u = q;
            if !d.is_zero() {
                terms.push(format!("{d}*{}^{}", self.p, self.val + i));
            }
        }
        terms.push(format!("O({}^{})", self.p, self.abs_prec()));
        terms.join(" + ")
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_digits())
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_digits())
    }
}

/// Serialized form: `{"p", "valuation", "unit" (decimal), "rel"}`.
#[derive(Serialize, Deserialize)]
struct PadicRepr {
    p: u32,
    valuation: i64,
    unit: String,
    rel: u32,
}

impl Serialize for PadicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PadicRepr { p: self.p, valuation: self.val, unit: self.unit.to_string(), rel: self.rel }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PadicRepr::deserialize(d)?;
        let unit: BigInt = r.unit.parse().map_err(serde::de::Error::custom)?;
        if unit.is_negative() || !crate::linalg::is_prime(r.p as u64) || r.p == 2 {
            return Err(serde::de::Error::custom("invalid p-adic number"));
        }
        Ok(Self::normalized(r.p, r.valuation, unit, r.valuation + r.rel as i64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: u32, n: i64) -> PadicNumber {
        PadicNumber::from_i64(p, n, 10)
    }

    #[test]
    fn sqrt_examples() {
        let [a, b] = q(5, 4).sqrt().unwrap();
        assert_eq!(a, q(5, 2));
        assert_eq!(b, q(5, -2));
        assert_eq!(q(5, 2).sqrt().unwrap_err(), PadicError::NoRoot);
        let [r, s] = q(5, 6).sqrt().unwrap();
        assert!([1, 4].contains(&r.leading_digit()));
        assert!(r.square().approx_eq(&q(5, 6)));
        assert!(s.square().approx_eq(&q(5, 6)));
        assert_eq!(q(5, 5).sqrt().unwrap_err(), PadicError::NoRoot);
        let [t, _] = q(5, 25 * 6).sqrt().unwrap();
        assert_eq!(t.valuation(), 1);
    }

    #[test]
    fn precision_bookkeeping() {
        let a = PadicNumber::from_i64(5, 7, 4);
        let b = PadicNumber::from_i64(5, 3, 6);
        assert_eq!(a.add(&b).abs_prec(), 4);
        assert_eq!(a.mul(&b).rel_prec(), 4);
        let c = PadicNumber::from_i64(5, 5, 6);
        assert_eq!(c.valuation(), 1);
        assert_eq!(a.mul(&c).abs_prec(), 5);
        let z = a.sub(&a);
        assert!(z.is_zero());
        assert_eq!(z.valuation(), 4);
        assert_eq!(q(5, 1).div(&z).unwrap_err(), PadicError::DivisionByZero);
        let inv = q(5, 3).inverse().unwrap();
        assert!(inv.mul(&q(5, 3)).approx_eq(&PadicNumber::one(5, 10)));
        assert_eq!(PadicNumber::from_i64(5, 1, 3).div(&q(5, 25)).unwrap().valuation(), -2);
    }

    #[test]
    fn rationals_and_residues() {
        let third = PadicNumber::from_rational(5, &BigRational::new(1.into(), 3.into()), 6);
        assert!(third.mul_int(3).approx_eq(&PadicNumber::one(5, 6)));
        assert_eq!(q(5, -1).residue(3).unwrap(), BigInt::from(124));
        assert_eq!(q(5, 3).inverse().unwrap().residue(12).unwrap_err(), PadicError::PrecisionExhausted);
        let json = serde_json::to_string(&third).unwrap();
        let back: PadicNumber = serde_json::from_str(&json).unwrap();
        assert_eq!(back, third);
    }

    proptest! {
        #[test]
        fn ring_laws(a in -10_000i64..10_000, b in -10_000i64..10_000, c in 1i64..10_000) {
            let p = 7;
            let (x, y, z) = (q(p, a), q(p, b), q(p, c));
            prop_assert!(x.add(&y).approx_eq(&q(p, a + b)));
            prop_assert!(x.mul(&y).approx_eq(&q(p, a * b)));
            prop_assert!(x.mul(&y).div(&z).unwrap().mul(&z).approx_eq(&x.mul(&y)));
            prop_assert!(x.sub(&x).is_zero());
        }

        #[test]
        fn sqrt_of_squares(a in 1i64..100_000) {
            let x = q(5, a);
            let [r, s] = x.square().sqrt().unwrap();
            prop_assert!(r.approx_eq(&x) || s.approx_eq(&x));
            prop_assert!(r.leading_digit() <= s.leading_digit());
        }
    }
}
