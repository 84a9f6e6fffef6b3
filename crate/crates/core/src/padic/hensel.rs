use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::number::{p_pow, PadicNumber};
use super::PadicError;
use crate::elliptic::IntPoly;

fn eval_mod(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, a| (acc * x + a).mod_floor(m))
}

fn derivative(c: &[BigInt]) -> Vec<BigInt> {
    c.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect()
}

/// Newton iteration from `y` (a simple root mod `p`) to a root mod `p^n`.
fn newton(c: &[BigInt], y: BigInt, p: u32, n: u32) -> BigInt {
    let m = p_pow(p, n);
    let d = derivative(c);
    let mut y = y;
    for _ in 0..2 * n + 8 {
        let v = eval_mod(c, &y, &m);
        if v.is_zero() {
            break;
        }
        let dv = eval_mod(&d, &y, &m);
        let inv = dv.modinv(&m).expect("simple root");
        y = (y - v * inv).mod_floor(&m);
    }
    y
}

/// The root of `f` congruent to `r0` mod `p`, correct mod `p^n`.
pub fn hensel_root(f: &IntPoly, r0: u64, p: u32, n: u32) -> Result<PadicNumber, PadicError> {
    if f.eval_mod(r0, p as u64) != 0 {
        return Err(PadicError::NotARoot);
    }
    if f.derivative().eval_mod(r0, p as u64) == 0 {
        return Err(PadicError::EtaleFailure);
    }
    let r = newton(f.coeffs(), BigInt::from(r0), p, n.max(1));
    Ok(PadicNumber::from_integer(p, &r, n as i64))
}

/// Roots in `Z_p` of a polynomial known modulo `p^a`.
#[derive(Debug, Clone, Default)]
pub struct RootSearch {
    /// `(r, k)`: a root known modulo `p^k`.
    pub roots: Vec<(BigInt, u32)>,
    /// Some branch ran out of precision before separating its roots.
    pub exhausted: bool,
}

/// `h(y0 + p Y)` with coefficients mod `m`.
fn shift_and_scale(h: &[BigInt], y0: u32, p: u32, m: &BigInt) -> Vec<BigInt> {
    // Taylor shift by y0 via repeated synthetic division
    let mut c: Vec<BigInt> = h.to_vec();
    let y = BigInt::from(y0);
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &c[j + 1] * &y;
            c[j] = (&c[j] + t).mod_floor(m);
        }
    }
    let pb = BigInt::from(p);
    let mut scale = BigInt::one();
    for a in c.iter_mut() {
        *a = (&*a * &scale).mod_floor(m);
        scale *= &pb;
    }
    c
}

fn valuation_mod(a: &BigInt, p: u32, cap: u32) -> u32 {
    if a.is_zero() {
        return cap;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut x = a.clone();
    while v < cap && (&x % &pb).is_zero() {
        x /= &pb;
        v += 1;
    }
    v
}

fn search(h: Vec<BigInt>, a: u32, p: u32, prefix: BigInt, depth: u32, first: Option<u32>, out: &mut RootSearch) {
    let c = h.iter().map(|x| valuation_mod(x, p, a)).min().unwrap_or(a);
    if c >= a {
        out.exhausted = true;
        return;
    }
    let a = a - c;
    let m = p_pow(p, a);
    let pc = p_pow(p, c);
    let hn: Vec<BigInt> = h.iter().map(|x| (x / &pc).mod_floor(&m)).collect();
    let pb = BigInt::from(p);
    let dn = derivative(&hn);
    let digits: Vec<u32> = match first {
        Some(d) => vec![d],
        None => (0..p).collect(),
    };
    let scale = p_pow(p, depth);
    for y0 in digits {
        let y = BigInt::from(y0);
        if !eval_mod(&hn, &y, &pb).is_zero() {
            continue;
        }
        if !eval_mod(&dn, &y, &pb).is_zero() {
            let root = newton(&hn, y, p, a);
            out.roots.push((&prefix + &scale * root, depth + a));
        } else if a <= 1 {
            out.exhausted = true;
        } else {
            let next = shift_and_scale(&hn, y0, p, &m);
            search(next, a, p, &prefix + &scale * y, depth + 1, None, out);
        }
    }
}

/// All roots in `Z_p` of `h` (coefficients mod `p^a`, constant term first),
/// optionally restricted to a fixed first digit.
pub fn zp_roots(h: &[BigInt], p: u32, a: u32, first_digit: Option<u32>) -> RootSearch {
    let m = p_pow(p, a);
    let h: Vec<BigInt> = h.iter().map(|x| x.mod_floor(&m)).collect();
    let mut out = RootSearch::default();
    search(h, a, p, BigInt::zero(), 0, first_digit, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hensel_examples() {
        let f = IntPoly::from_i64(&[-4, 0, 1]);
        assert_eq!(hensel_root(&f, 2, 5, 6).unwrap(), PadicNumber::from_i64(5, 2, 6));
        let g = IntPoly::from_i64(&[-6, 0, 1]);
        let r = hensel_root(&g, 1, 5, 4).unwrap();
        let sq = r.residue(4).unwrap().pow(2u32) % BigInt::from(625);
        assert_eq!(sq, BigInt::from(6));
        assert!(r.leading_digit() == 1);
        assert_eq!(hensel_root(&IntPoly::from_i64(&[-5, 0, 1]), 0, 5, 4).unwrap_err(), PadicError::EtaleFailure);
        assert_eq!(hensel_root(&f, 1, 5, 4).unwrap_err(), PadicError::NotARoot);
    }

    #[test]
    fn repeated_roots_mod_p_are_separated() {
        // (x - 1)(x - 6)(x - 2) over Z_5: 1 and 6 collide mod 5
        let f = &(&IntPoly::from_i64(&[-1, 1]) * &IntPoly::from_i64(&[-6, 1])) * &IntPoly::from_i64(&[-2, 1]);
        let s = zp_roots(f.coeffs(), 5, 12, None);
        assert!(!s.exhausted);
        let mut roots: Vec<BigInt> = s.roots.iter().map(|(r, k)| r % p_pow(5, *k)).collect();
        roots.sort();
        assert_eq!(roots, vec![BigInt::from(1), BigInt::from(2), BigInt::from(6)]);
        // x^2 + 1 has two roots in Z_5, x^2 - 2 none
        assert_eq!(zp_roots(IntPoly::from_i64(&[1, 0, 1]).coeffs(), 5, 8, None).roots.len(), 2);
        assert!(zp_roots(IntPoly::from_i64(&[-2, 0, 1]).coeffs(), 5, 8, None).roots.is_empty());
        // a genuine double root cannot be resolved at finite precision
        assert!(zp_roots(IntPoly::from_i64(&[1, -2, 1]).coeffs(), 5, 8, None).exhausted);
    }
}
