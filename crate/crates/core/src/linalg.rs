//! Dense linear algebra over a prime field `F_p`.
//!
//! Everything in the cohomology code reduces to kernels, images and
//! solvability questions for matrices over `F_p`, so this module is kept
//! small and exact: entries are `u32` residues, products are formed in `u64`
//! and reduced immediately.

use std::fmt;

use thiserror::Error;

/// Largest modulus accepted; products of two residues stay far below `u64::MAX`.
pub const MAX_MODULUS: u32 = 1 << 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("modulus {0} is not an odd prime below 2^15")]
    BadModulus(u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn check_modulus(p: u32) -> Result<(), LinalgError> {
    if p == 2 || p >= MAX_MODULUS || !is_prime(p as u64) {
        return Err(LinalgError::BadModulus(p));
    }
    Ok(())
}

#[inline]
pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn pow_mod(mut base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue (Fermat).
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p as u64 - 2, p)
}

pub fn reduce_i64(x: i64, p: u32) -> u32 {
    x.rem_euclid(p as i64) as u32
}

/// A dense `rows x cols` matrix over `F_p`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}, ", self.p)?;
        f.debug_list().entries(self.data.chunks(self.cols.max(1))).finish()?;
        write!(f, ")")
    }
}

impl FpMatrix {
    /// Builds a matrix from signed row-major entries, reducing each mod `p`.
    pub fn new(p: u32, rows: usize, cols: usize, entries: &[i64]) -> Result<Self, LinalgError> {
        check_modulus(p)?;
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            p,
            rows,
            cols,
            data: entries.iter().map(|&x| reduce_i64(x, p)).collect(),
        })
    }

    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::new(p, rows.len(), cols, &flat)
    }

    /// Internal constructor for already-reduced data; the modulus is trusted.
    pub(crate) fn from_reduced(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| x < p));
        Self { p, rows, cols, data }
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Self { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Stacks residue vectors as the rows of a matrix.
    pub fn from_vectors(p: u32, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend_from_slice(r);
        }
        Self::from_reduced(p, rows.len(), cols, data)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows || self.p != other.p {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let p = self.p as u64;
        let mut out = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            let mut acc = vec![0u64; other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (j, v) in acc.into_iter().enumerate() {
                out[i * other.cols + j] = v as u32;
            }
        }
        Self::from_reduced(self.p, self.rows, other.cols, out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| add_mod(a, b, self.p)).collect();
        Self::from_reduced(self.p, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| sub_mod(a, b, self.p)).collect();
        Self::from_reduced(self.p, self.rows, self.cols, data)
    }

    pub fn scale(&self, c: u32) -> Self {
        let c = c % self.p;
        let data = self.data.iter().map(|&a| mul_mod(a, c, self.p)).collect();
        Self::from_reduced(self.p, self.rows, self.cols, data)
    }

    /// Kronecker product; row index of the result is `i * other.rows + k`.
    pub fn kronecker(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(self.p, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * cols + j * other.cols + l] =
                            mul_mod(a, other.get(k, l), self.p);
                    }
                }
            }
        }
        out
    }

    /// Determinant of a square matrix by elimination.
    pub fn det(&self) -> Result<u32, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut m = self.clone();
        let n = self.rows;
        let p = self.p;
        let mut det = 1u32;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| m.get(r, col) != 0) else {
                return Ok(0);
            };
            if piv != col {
                m.swap_rows(piv, col);
                det = neg_mod(det, p);
            }
            let pv = m.get(col, col);
            det = mul_mod(det, pv, p);
            let inv = inv_mod(pv, p);
            for r in col + 1..n {
                let f = mul_mod(m.get(r, col), inv, p);
                if f != 0 {
                    m.axpy_row(r, col, neg_mod(f, p));
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[dst] += f * row[src]`
    fn axpy_row(&mut self, dst: usize, src: usize, f: u32) {
        let p = self.p as u64;
        let cols = self.cols;
        let (s, d) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * cols);
            (&lo[src * cols..(src + 1) * cols], &mut hi[..cols])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * cols);
            (&hi[..cols], &mut lo[dst * cols..(dst + 1) * cols])
        };
        for (x, &y) in d.iter_mut().zip(s) {
            if y != 0 {
                *x = ((*x as u64 + f as u64 * y as u64) % p) as u32;
            }
        }
    }

    fn scale_row(&mut self, r: usize, f: u32) {
        let p = self.p;
        for x in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *x = mul_mod(*x, f, p);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(piv, r);
            let inv = inv_mod(self.get(r, c), p);
            self.scale_row(r, inv);
            for i in 0..self.rows {
                if i != r {
                    let f = self.get(i, c);
                    if f != 0 {
                        self.axpy_row(i, r, neg_mod(f, p));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place();
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`; `cols - rank` vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = neg_mod(r.get(i, free), p);
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Self::zeros(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            aug.data[i * (self.cols + 1)..i * (self.cols + 1) + self.cols].copy_from_slice(self.row(i));
            aug.data[i * (self.cols + 1) + self.cols] = b[i] % self.p;
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(i, self.cols);
        }
        Ok(Some(x))
    }

    /// Two-sided inverse of a square matrix.
    pub fn invert(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.p, n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        let mut inv = Self::zeros(self.p, n, n);
        for i in 0..n {
            inv.data[i * n..(i + 1) * n].copy_from_slice(&aug.row(i)[n..]);
        }
        Ok(inv)
    }
}

/// An incrementally maintained subspace of `F_p^dim`, kept in reduced echelon
/// form. Used for quotient bases (cocycles modulo coboundaries) and for
/// membership tests.
#[derive(Debug, Clone)]
pub struct Subspace {
    p: u32,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(p: u32, dim: usize) -> Self {
        Self { p, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn spanned_by<'a>(p: u32, dim: usize, vectors: impl IntoIterator<Item = &'a Vec<u32>>) -> Self {
        let mut s = Self::new(p, dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` against the stored basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.dim);
        let p = self.p as u64;
        let mut w = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = w[pc];
            if f == 0 {
                continue;
            }
            let f = (self.p - f) as u64;
            for (x, &y) in w.iter_mut().zip(row) {
                if y != 0 {
                    *x = ((*x as u64 + f * y as u64) % p) as u32;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns `false` if it was already contained.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut w = self.reduce(v);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let p = self.p;
        let inv = inv_mod(w[pc], p);
        for x in &mut w {
            *x = mul_mod(*x, inv, p);
        }
        // keep the basis fully reduced so `reduce` is a single pass
        for row in &mut self.rows {
            let f = row[pc];
            if f != 0 {
                let f = neg_mod(f, p);
                for (x, &y) in row.iter_mut().zip(&w) {
                    *x = add_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }
}
