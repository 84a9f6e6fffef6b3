use num_bigint::BigInt;

use super::poly::IntPoly;
use super::WeierstrassCurve;

/// `ψ_n` written as `f_n(x)` (odd `n`) or `ψ_2 · f_n(x)` (even `n`),
/// where `ψ_2 = 2y + a1 x + a3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionPolynomial {
    pub n: usize,
    pub poly: IntPoly,
    pub has_y_factor: bool,
}

/// The `x`-parts `f_0, ..., f_N` and `F = ψ_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6`.
#[derive(Debug, Clone)]
pub struct DivisionPolynomials {
    f: Vec<IntPoly>,
    psi2_sq: IntPoly,
}

impl DivisionPolynomials {
    pub fn new(c: &WeierstrassCurve, max_n: usize) -> Self {
        let big = |v: i128| BigInt::from(v);
        let (b2, b4, b6, b8) = (c.b2(), c.b4(), c.b6(), c.b8());
        let psi2_sq = IntPoly::new(vec![big(b6), big(2 * b4), big(b2), big(4)]);
        let f3 = IntPoly::new(vec![big(b8), big(3 * b6), big(3 * b4), big(b2), big(3)]);
        let f4 = IntPoly::new(vec![
            big(b4 * b8 - b6 * b6),
            big(b2 * b8 - b4 * b6),
            big(10 * b8),
            big(10 * b6),
            big(5 * b4),
            big(b2),
            big(2),
        ]);
        let mut f = vec![IntPoly::zero(), IntPoly::one(), IntPoly::one(), f3, f4];
        let ff = &psi2_sq * &psi2_sq;
        for n in 5..=max_n {
            let m = n / 2;
            let next = if n % 2 == 1 {
                let a = &f[m + 2] * &f[m].pow(3);
                let b = &f[m - 1] * &f[m + 1].pow(3);
                if m % 2 == 0 {
                    &(&ff * &a) - &b
                } else {
                    &a - &(&ff * &b)
                }
            } else {
                let inner = &(&f[m + 2] * &f[m - 1].pow(2)) - &(&f[m - 2] * &f[m + 1].pow(2));
                &f[m] * &inner
            };
            f.push(next);
        }
        f.truncate(max_n.max(4) + 1);
        Self { f, psi2_sq }
    }

    pub fn max_n(&self) -> usize {
        self.f.len() - 1
    }

    pub fn f(&self, n: usize) -> &IntPoly {
        &self.f[n]
    }

    pub fn psi2_squared(&self) -> &IntPoly {
        &self.psi2_sq
    }

    /// `ψ_n^2` as a polynomial in `x`.
    pub fn psi_squared(&self, n: usize) -> IntPoly {
        let sq = &self.f[n] * &self.f[n];
        if n.is_multiple_of(2) {
            &sq * &self.psi2_sq
        } else {
            sq
        }
    }

    /// `(φ_n, ψ_n^2)` with `x(nP) = φ_n(x) / ψ_n^2(x)`; needs `n + 1 <= max_n`.
    pub fn multiplication_map(&self, n: usize) -> (IntPoly, IntPoly) {
        assert!(n >= 1 && n < self.max_n(), "increase max_n");
        let x = IntPoly::x();
        let den = self.psi_squared(n);
        let cross = &self.f[n - 1] * &self.f[n + 1];
        // for odd n both neighbours are even and contribute ψ_2^2
        let cross = if n % 2 == 1 { &cross * &self.psi2_sq } else { cross };
        (&(&x * &den) - &cross, den)
    }
}

pub fn division_polynomial(c: &WeierstrassCurve, n: usize) -> DivisionPolynomial {
    let table = DivisionPolynomials::new(c, n.max(4));
    DivisionPolynomial { n, poly: table.f(n).clone(), has_y_factor: n.is_multiple_of(2) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds() {
        let e = WeierstrassCurve::short("e", 2, 3).unwrap();
        assert_eq!(division_polynomial(&e, 1).poly, IntPoly::one());
        // 3x^4 + 6a x^2 + 12b x - a^2
        assert_eq!(division_polynomial(&e, 3).poly, IntPoly::from_i64(&[-4, 36, 12, 0, 3]));
        assert!(division_polynomial(&e, 4).has_y_factor);
    }

    #[test]
    fn degrees() {
        let e = WeierstrassCurve::new("37a1", [0, 0, 1, -1, 0]).unwrap();
        let t = DivisionPolynomials::new(&e, 12);
        for n in 1..=12 {
            let want = if n % 2 == 1 { (n * n - 1) / 2 } else { (n * n - 4) / 2 };
            assert_eq!(t.f(n).degree(), Some(want), "n = {n}");
            // leading coefficient n (odd) or n/2 (even)
            let lead = if n % 2 == 1 { n } else { n / 2 };
            assert_eq!(t.f(n).leading(), BigInt::from(lead));
        }
    }

    /// A rational point mod p is a root of f_n iff its order divides n and
    /// exceeds 2; orders come from repeated addition.
    #[test]
    fn torsion_roots_mod_p() {
        let e = WeierstrassCurve::short("e", 1, 1).unwrap();
        let p = 13u64;
        let t = DivisionPolynomials::new(&e, 8);
        let pts = affine_points(p, 1, 1);
        for &(x, y) in &pts {
            let order = point_order(p, 1, (x, y));
            for n in 3..=7 {
                let root = t.f(n).eval_mod(x, p) == 0;
                assert_eq!(root, n % order == 0 && order > 2, "x={x} n={n} order={order}");
            }
        }
    }

    fn affine_points(p: u64, a: u64, b: u64) -> Vec<(u64, u64)> {
        let mut v = Vec::new();
        for x in 0..p {
            for y in 0..p {
                if (y * y) % p == (x * x % p * x + a * x + b) % p {
                    v.push((x, y));
                }
            }
        }
        v
    }

    fn inv(a: u64, p: u64) -> u64 {
        crate::linalg::inv_mod(a as u32, p as u32) as u64
    }

    fn add(p: u64, a: u64, u: Option<(u64, u64)>, v: Option<(u64, u64)>) -> Option<(u64, u64)> {
        let (Some((x1, y1)), Some((x2, y2))) = (u, v) else { return u.or(v) };
        let l = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return None;
            }
            (3 * x1 * x1 + a) % p * inv(2 * y1 % p, p) % p
        } else {
            (y2 + p - y1) % p * inv((x2 + p - x1) % p, p) % p
        };
        let x3 = (l * l + 2 * p - x1 - x2) % p;
        let y3 = (l * ((x1 + p - x3) % p) % p + p - y1) % p;
        Some((x3, y3))
    }

    fn point_order(p: u64, a: u64, pt: (u64, u64)) -> usize {
        let mut acc = Some(pt);
        let mut n = 1;
        while acc.is_some() {
            acc = add(p, a, acc, Some(pt));
            n += 1;
        }
        n
    }

    #[test]
    fn multiplication_map_matches_group_law() {
        let e = WeierstrassCurve::short("e", 1, 1).unwrap();
        let p = 13u64;
        let t = DivisionPolynomials::new(&e, 8);
        for n in 2..=6 {
            let (num, den) = t.multiplication_map(n);
            for &(x, y) in &affine_points(p, 1, 1) {
                let mut acc = Some((x, y));
                for _ in 1..n {
                    acc = add(p, 1, acc, Some((x, y)));
                }
                let d = den.eval_mod(x, p);
                match acc {
                    None => assert_eq!(d, 0),
                    Some((xn, _)) => {
                        assert_ne!(d, 0);
                        assert_eq!(num.eval_mod(x, p), xn * d % p, "n={n} x={x}");
                    }
                }
            }
        }
    }
}
