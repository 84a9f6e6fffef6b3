//! Explicit subgroups of `GL_2(F_p)`.
//!
//! A [`MatGroup`] keeps its full element table sorted by a canonical
//! encoding, so two groups are equal exactly when their element lists are.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::group::Group;
use crate::linalg::{check_modulus, inv_mod, mul_mod, neg_mod, pow_mod, sub_mod, FpMatrix};
use crate::GroupError;

/// An invertible 2x2 matrix over `F_p`, entries `[a, b, c, d]` row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    entries: [u32; 4],
    p: u32,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "{a},{b},{c},{d}")
    }
}

impl GroupElement {
    pub fn new(p: u32, a: i64, b: i64, c: i64, d: i64) -> Result<Self, GroupError> {
        check_modulus(p)?;
        let r = |x: i64| x.rem_euclid(p as i64) as u32;
        let e = Self { entries: [r(a), r(b), r(c), r(d)], p };
        if e.det() == 0 {
            return Err(GroupError::NotInvertible(e.to_string()));
        }
        Ok(e)
    }

    pub fn identity(p: u32) -> Self {
        Self { entries: [1, 0, 0, 1], p }
    }

    pub(crate) fn from_raw(p: u32, entries: [u32; 4]) -> Self {
        Self { entries, p }
    }

    /// Parses `"a,b,c,d"` (row-major, integers).
    pub fn parse(p: u32, s: &str) -> Result<Self, GroupError> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(GroupError::Parse(s.to_string()));
        }
        let mut v = [0i64; 4];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| GroupError::Parse(s.to_string()))?;
        }
        Self::new(p, v[0], v[1], v[2], v[3])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn entries(&self) -> [u32; 4] {
        self.entries
    }

    pub fn det(&self) -> u32 {
        let [a, b, c, d] = self.entries;
        sub_mod(mul_mod(a, d, self.p), mul_mod(b, c, self.p), self.p)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.p;
        let [a, b, c, d] = self.entries;
        let [e, f, g, h] = o.entries;
        let dot = |x: u32, y: u32, z: u32, w: u32| ((x as u64 * y as u64 + z as u64 * w as u64) % p as u64) as u32;
        Self { entries: [dot(a, e, b, g), dot(a, f, b, h), dot(c, e, d, g), dot(c, f, d, h)], p }
    }

    pub fn inverse(&self) -> Self {
        let p = self.p;
        let di = inv_mod(self.det(), p);
        let [a, b, c, d] = self.entries;
        Self {
            entries: [mul_mod(d, di, p), mul_mod(neg_mod(b, p), di, p), mul_mod(neg_mod(c, p), di, p), mul_mod(a, di, p)],
            p,
        }
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.entries[2] == 0
    }

    pub fn apply(&self, v: [u32; 2]) -> [u32; 2] {
        let p = self.p as u64;
        let [a, b, c, d] = self.entries;
        [
            ((a as u64 * v[0] as u64 + b as u64 * v[1] as u64) % p) as u32,
            ((c as u64 * v[0] as u64 + d as u64 * v[1] as u64) % p) as u32,
        ]
    }

    pub fn to_matrix(&self) -> FpMatrix {
        FpMatrix::from_reduced(self.p, 2, 2, self.entries.to_vec())
    }

    fn key(&self) -> u64 {
        let p = self.p as u64;
        let [a, b, c, d] = self.entries.map(u64::from);
        ((a * p + b) * p + c) * p + d
    }
}

/// A finite subgroup of `GL_2(F_p)` with its complete, sorted element table.
#[derive(Clone)]
pub struct MatGroup {
    p: u32,
    elements: Vec<GroupElement>,
    index: HashMap<u64, usize>,
    table: Arc<Group>,
}

impl fmt::Debug for MatGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatGroup")
            .field("p", &self.p)
            .field("order", &self.order())
            .field("generators", &self.generators())
            .finish()
    }
}

impl PartialEq for MatGroup {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.elements == other.elements
    }
}

impl Eq for MatGroup {}

pub fn gl2_order(p: u32) -> usize {
    let p = p as usize;
    p * (p - 1) * (p - 1) * (p + 1)
}

/// Smallest generator of `F_p^*`.
pub fn primitive_root(p: u32) -> u32 {
    let n = p - 1;
    let mut factors = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (n / q) as u64, p) != 1))
        .unwrap_or(1)
}

/// Smallest quadratic non-residue mod `p`.
pub fn non_residue(p: u32) -> u32 {
    (2..p).find(|&e| pow_mod(e, (p as u64 - 1) / 2, p) == p - 1).expect("odd prime has a non-residue")
}

/// Result of the Borel / `SL_2` dichotomy for a group of order divisible by `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dichotomy {
    /// `c * G * c^-1` lies in the upper-triangular Borel subgroup.
    BorelConjugate { witness: GroupElement },
    /// Every element of `SL_2(F_p)` lies in `G`.
    ContainsSl2,
}

impl MatGroup {
    /// The smallest subgroup containing `gens`.
    pub fn close(p: u32, gens: &[GroupElement]) -> Result<Self, GroupError> {
        check_modulus(p)?;
        for g in gens {
            if g.p != p {
                return Err(GroupError::ModulusMismatch);
            }
            if g.det() == 0 {
                return Err(GroupError::NotInvertible(g.to_string()));
            }
        }
        let id = GroupElement::identity(p);
        let mut seen: HashMap<u64, ()> = HashMap::from([(id.key(), ())]);
        let mut elements = vec![id];
        let mut i = 0;
        while i < elements.len() {
            let x = elements[i];
            for g in gens {
                let y = g.mul(&x);
                if seen.insert(y.key(), ()).is_none() {
                    elements.push(y);
                }
            }
            i += 1;
        }
        Self::from_elements(p, elements, gens)
    }

    /// Builds the table for a set of elements already known to be closed.
    fn from_elements(p: u32, mut elements: Vec<GroupElement>, gens: &[GroupElement]) -> Result<Self, GroupError> {
        elements.sort_unstable();
        elements.dedup();
        let n = elements.len();
        let index: HashMap<u64, usize> = elements.iter().enumerate().map(|(i, e)| (e.key(), i)).collect();
        let mut mul = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                let k = index.get(&a.mul(b).key()).ok_or(GroupError::NotSubgroup)?;
                mul.push(*k as u16);
            }
        }
        let mut inv = Vec::with_capacity(n);
        for a in &elements {
            inv.push(*index.get(&a.inverse().key()).ok_or(GroupError::NotSubgroup)? as u16);
        }
        let identity = index[&GroupElement::identity(p).key()];
        let gen_idx: Vec<usize> = gens.iter().map(|g| index.get(&g.key()).copied().ok_or(GroupError::NotSubgroup)).collect::<Result<_, _>>()?;
        let table = Group::from_trusted_table(n, mul, inv, identity, &gen_idx)?;
        Ok(Self { p, elements, index, table: Arc::new(table) })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> GroupElement {
        self.elements[i]
    }

    /// Abstract Cayley-table view shared with the cohomology code.
    pub fn table(&self) -> &Arc<Group> {
        &self.table
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        self.table.generators().iter().map(|&i| self.elements[i]).collect()
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        if g.p != self.p {
            return None;
        }
        self.index.get(&g.key()).copied()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index_of(g).is_some()
    }

    pub fn is_subgroup_of(&self, other: &MatGroup) -> bool {
        self.p == other.p && self.elements.iter().all(|g| other.contains(g))
    }

    /// Parent indices of this group's elements inside `parent`.
    pub fn embedding_into(&self, parent: &MatGroup) -> Result<Vec<usize>, GroupError> {
        self.elements.iter().map(|g| parent.index_of(g).ok_or(GroupError::NotSubgroup)).collect()
    }

    /// Subgroup of `self` on the given element indices.
    pub fn subgroup_from_indices(&self, members: &[usize]) -> Result<MatGroup, GroupError> {
        let elems: Vec<GroupElement> = members.iter().map(|&i| self.elements[i]).collect();
        let sub = self.table.subgroup(members)?;
        let gens: Vec<GroupElement> = sub.group.generators().iter().map(|&i| self.elements[sub.embedding[i]]).collect();
        Self::from_elements(self.p, elems, &gens)
    }

    /// Determinant of every element, indexed like [`MatGroup::elements`].
    pub fn determinants(&self) -> Vec<u32> {
        self.elements.iter().map(GroupElement::det).collect()
    }

    pub fn conjugate(&self, c: &GroupElement) -> MatGroup {
        let ci = c.inverse();
        let gens: Vec<GroupElement> = self.generators().iter().map(|g| c.mul(g).mul(&ci)).collect();
        let elems = self.elements.iter().map(|g| c.mul(g).mul(&ci)).collect();
        Self::from_elements(self.p, elems, &gens).expect("conjugate of a group is a group")
    }

    fn check_lagrange(&self) -> bool {
        gl2_order(self.p).is_multiple_of(self.order())
    }

    /// Closure, inverse-closure, identity and Lagrange against `|GL_2(F_p)|`.
    pub fn verify_invariants(&self) -> bool {
        let id = GroupElement::identity(self.p);
        self.contains(&id)
            && self.check_lagrange()
            && self.elements.iter().all(|a| self.contains(&a.inverse()))
            && self.elements.iter().all(|a| self.elements.iter().all(|b| self.contains(&a.mul(b))))
            && MatGroup::close(self.p, &self.generators()).map(|g| g == *self).unwrap_or(false)
    }

    /// Every `<x>` for `x` in the group, deduplicated.
    pub fn cyclic_subgroups(&self) -> Vec<MatGroup> {
        self.table
            .cyclic_subgroups()
            .into_iter()
            .map(|(gen, members)| {
                let elems = members.iter().map(|&i| self.elements[i]).collect();
                Self::from_elements(self.p, elems, &[self.elements[gen]]).expect("cyclic subgroup")
            })
            .collect()
    }

    /// A Sylow `p`-subgroup for the defining prime `p`.
    pub fn sylow_p(&self) -> MatGroup {
        let p = self.p as usize;
        let mut target = 1;
        while self.order().is_multiple_of(target * p) {
            target *= p;
        }
        let t = &self.table;
        let is_p_power = |n: usize| {
            let mut n = n;
            while n.is_multiple_of(p) {
                n /= p;
            }
            n == 1
        };
        // A maximal p-subgroup is a Sylow subgroup; one greedy pass finds one.
        let mut gens = Vec::new();
        let mut current = vec![t.identity()];
        for x in 0..self.order() {
            if current.binary_search(&x).is_ok() || !is_p_power(t.element_order(x)) {
                continue;
            }
            let mut trial = gens.clone();
            trial.push(x);
            let c = t.closure(&trial);
            if is_p_power(c.len()) {
                gens = trial;
                current = c;
            }
        }
        debug_assert_eq!(current.len(), target);
        self.subgroup_from_indices(&current).expect("closure is a subgroup")
    }

    /// Does the group contain `SL_2(F_p)`? Certified by membership of the
    /// standard generators `[[1,1],[0,1]]` and `[[0,-1],[1,0]]`.
    pub fn contains_sl2(&self) -> bool {
        let p = self.p;
        let u = GroupElement::from_raw(p, [1, 1, 0, 1]);
        let w = GroupElement::from_raw(p, [0, p - 1, 1, 0]);
        self.contains(&u) && self.contains(&w)
    }

    /// A matrix `c` with `c * G * c^-1` upper triangular, if `G` stabilizes a line.
    pub fn borel_witness(&self) -> Option<GroupElement> {
        let p = self.p;
        let gens = self.generators();
        let lines = std::iter::once([0u32, 1]).chain((0..p).map(|t| [1u32, t]));
        for v in lines {
            let fixed = gens.iter().all(|g| {
                let w = g.apply(v);
                // w parallel to v
                sub_mod(mul_mod(w[0], v[1], p), mul_mod(w[1], v[0], p), p) == 0
            });
            if fixed {
                let w = if v[0] != 0 { [0, 1] } else { [1, 0] };
                // columns (v, w); its inverse conjugates v to e1
                let s = GroupElement::from_raw(p, [v[0], w[0], v[1], w[1]]);
                let c = s.inverse();
                let ci = s;
                if self.elements.iter().all(|g| c.mul(g).mul(&ci).is_upper_triangular()) {
                    return Some(c);
                }
            }
        }
        None
    }

    /// Borel-conjugate or contains `SL_2`, for groups of order divisible by `p`.
    pub fn classify_dichotomy(&self) -> Result<Dichotomy, GroupError> {
        if !self.order().is_multiple_of(self.p as usize) {
            return Err(GroupError::HypothesisNotMet { order: self.order(), p: self.p });
        }
        match (self.borel_witness(), self.contains_sl2()) {
            (Some(witness), false) => Ok(Dichotomy::BorelConjugate { witness }),
            (None, true) => Ok(Dichotomy::ContainsSl2),
            (w, s) => Err(GroupError::DichotomyViolated { borel: w.is_some(), sl2: s }),
        }
    }

    /// All subgroups of `GL_2(F_3)`.
    pub fn enumerate_all_subgroups(p: u32) -> Result<Vec<MatGroup>, GroupError> {
        if p != 3 {
            return Err(GroupError::Unsupported(format!("full subgroup enumeration only for p = 3, got {p}")));
        }
        Ok(gl2(p)?.all_subgroups())
    }

    /// All subgroups of this group (lattice closure of cyclic subgroups).
    pub fn all_subgroups(&self) -> Vec<MatGroup> {
        self.table
            .all_subgroups()
            .into_iter()
            .map(|m| self.subgroup_from_indices(&m).expect("lattice member is a subgroup"))
            .collect()
    }
}

fn elem(p: u32, e: [i64; 4]) -> GroupElement {
    let r = |x: i64| x.rem_euclid(p as i64) as u32;
    GroupElement::from_raw(p, e.map(r))
}

pub fn gl2(p: u32) -> Result<MatGroup, GroupError> {
    check_modulus(p)?;
    let g = primitive_root(p) as i64;
    MatGroup::close(p, &[elem(p, [g, 0, 0, 1]), elem(p, [1, 1, 0, 1]), elem(p, [0, -1, 1, 0])])
}

pub fn sl2(p: u32) -> Result<MatGroup, GroupError> {
    check_modulus(p)?;
    MatGroup::close(p, &[elem(p, [1, 1, 0, 1]), elem(p, [0, -1, 1, 0])])
}

/// Upper-triangular invertible matrices, order `p(p-1)^2`.
pub fn borel(p: u32) -> Result<MatGroup, GroupError> {
    check_modulus(p)?;
    let g = primitive_root(p) as i64;
    MatGroup::close(p, &[elem(p, [g, 0, 0, 1]), elem(p, [1, 0, 0, g]), elem(p, [1, 1, 0, 1])])
}

/// `B ∩ SL_2(F_p)`, order `p(p-1)`.
pub fn borel_sl2(p: u32) -> Result<MatGroup, GroupError> {
    check_modulus(p)?;
    let g = primitive_root(p);
    let gi = inv_mod(g, p);
    MatGroup::close(p, &[elem(p, [g as i64, 0, 0, gi as i64]), elem(p, [1, 1, 0, 1])])
}

/// Diagonal matrices, order `(p-1)^2`.
pub fn split_torus(p: u32) -> Result<MatGroup, GroupError> {
    check_modulus(p)?;
    let g = primitive_root(p) as i64;
    MatGroup::close(p, &[elem(p, [g, 0, 0, 1]), elem(p, [1, 0, 0, g])])
}

/// Upper unitriangular matrices, order `p`.
pub fn unipotent(p: u32) -> Result<MatGroup, GroupError> {
    check_modulus(p)?;
    MatGroup::close(p, &[elem(p, [1, 1, 0, 1])])
}

/// `F_{p^2}^*` acting on `F_{p^2} = F_p + F_p sqrt(e)` for the least
/// non-residue `e`: matrices `[[a, e b], [b, a]]`, cyclic of order `p^2 - 1`.
pub fn nonsplit_torus(p: u32) -> Result<MatGroup, GroupError> {
    check_modulus(p)?;
    let e = non_residue(p) as i64;
    let target = (p as usize) * (p as usize) - 1;
    for a in 0..p as i64 {
        for b in 1..p as i64 {
            let x = elem(p, [a, e * b, b, a]);
            let g = MatGroup::close(p, &[x])?;
            if g.order() == target {
                return Ok(g);
            }
        }
    }
    unreachable!("F_(p^2)^* is cyclic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn close_small_examples() {
        let id = GroupElement::identity(3);
        assert_eq!(MatGroup::close(3, &[id]).unwrap().order(), 1);
        let u = GroupElement::new(3, 1, 1, 0, 1).unwrap();
        // orbit of repeated multiplication: u, u^2, u^3 = 1
        let mut orbit = vec![u];
        while *orbit.last().unwrap() != id {
            orbit.push(orbit.last().unwrap().mul(&u));
        }
        assert_eq!(MatGroup::close(3, &[u]).unwrap().order(), orbit.len());
        let w = GroupElement::new(3, 0, -1, 1, 0).unwrap();
        // |SL_2(F_p)| = p(p^2 - 1)
        assert_eq!(MatGroup::close(3, &[u, w]).unwrap().order(), 3 * 8);
    }

    #[test]
    fn rejects_singular_generators() {
        assert!(matches!(GroupElement::new(5, 1, 2, 2, 4), Err(GroupError::NotInvertible(_))));
        assert!(GroupElement::parse(5, "1,2,3").is_err());
        assert_eq!(GroupElement::parse(5, "1, -1, 0, 1").unwrap().entries(), [1, 4, 0, 1]);
    }

    #[test]
    fn standard_group_orders() {
        assert_eq!(borel(3).unwrap().order(), 12);
        assert_eq!(split_torus(3).unwrap().order(), 4);
        assert_eq!(unipotent(3).unwrap().order(), 3);
        assert_eq!(nonsplit_torus(5).unwrap().order(), 24);
        assert_eq!(nonsplit_torus(3).unwrap().order(), 8);
        assert_eq!(gl2(3).unwrap().order(), 48);
        assert_eq!(gl2(5).unwrap().order(), 480);
        assert_eq!(sl2(5).unwrap().order(), 120);
        assert_eq!(borel_sl2(5).unwrap().order(), 20);
        assert!(split_torus(3).unwrap().is_subgroup_of(&borel(3).unwrap()));
    }

    #[test]
    fn nonsplit_torus_matrix_model() {
        let t = nonsplit_torus(5).unwrap();
        let e = non_residue(5);
        assert_eq!(e, 2);
        for g in t.elements() {
            let [a, b, c, d] = g.entries();
            assert_eq!(a, d);
            assert_eq!(b, mul_mod(e, c, 5));
        }
    }

    #[test]
    fn cyclic_subgroups_examples() {
        let triv = MatGroup::close(5, &[]).unwrap();
        assert_eq!(triv.cyclic_subgroups(), vec![triv.clone()]);
        let u = unipotent(3).unwrap();
        let cs = u.cyclic_subgroups();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].order(), 1);
        assert_eq!(cs[1], u);
    }

    #[test]
    fn cyclic_subgroups_of_sl2_f3_brute_force() {
        let g = sl2(3).unwrap();
        // brute force: the set of powers of each element, deduplicated
        let mut sets: Vec<Vec<GroupElement>> = Vec::new();
        for &x in g.elements() {
            let mut s = vec![GroupElement::identity(3)];
            let mut y = x;
            while y != GroupElement::identity(3) {
                s.push(y);
                y = y.mul(&x);
            }
            s.sort();
            if !sets.contains(&s) {
                sets.push(s);
            }
        }
        assert_eq!(g.cyclic_subgroups().len(), sets.len());
        // SL_2(F_3): 1, {±1}, four of order 3, three of order 4, four of order 6
        assert_eq!(sets.len(), 13);
        assert!(g.cyclic_subgroups().iter().all(|c| c.generators().len() <= 1));
    }

    #[test]
    fn sylow_examples() {
        let t = split_torus(5).unwrap();
        assert_eq!(t.sylow_p().order(), 1);
        let s = gl2(3).unwrap().sylow_p();
        assert_eq!(s.order(), 3);
        // conjugate to U: fixes a line, and the conjugate is unitriangular
        let c = s.borel_witness().unwrap();
        assert_eq!(s.conjugate(&c), unipotent(3).unwrap());
        assert_eq!(sl2(5).unwrap().sylow_p().order(), 5);
    }

    #[test]
    fn dichotomy_examples() {
        let b = borel(3).unwrap();
        assert_eq!(
            b.classify_dichotomy().unwrap(),
            Dichotomy::BorelConjugate { witness: GroupElement::identity(3) }
        );
        assert_eq!(gl2(3).unwrap().classify_dichotomy().unwrap(), Dichotomy::ContainsSl2);
        assert!(matches!(
            split_torus(3).unwrap().classify_dichotomy(),
            Err(GroupError::HypothesisNotMet { .. })
        ));
    }

    #[test]
    fn enumeration_only_at_three() {
        assert!(matches!(MatGroup::enumerate_all_subgroups(5), Err(GroupError::Unsupported(_))));
        let all = MatGroup::enumerate_all_subgroups(3).unwrap();
        assert_eq!(all.first().unwrap().order(), 1);
        assert_eq!(all.last().unwrap().order(), 48);
        assert!(all.iter().all(MatGroup::verify_invariants));
    }

    #[test]
    fn primitive_roots_and_residues() {
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(non_residue(7), 3);
    }
}
