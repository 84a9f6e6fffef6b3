use std::collections::VecDeque;
use std::sync::Arc;

use crate::linalg::{add_mod, neg_mod, FpMatrix, Subspace};

use super::cocycle::{CohomologyClass, add_assign};
use super::module::{tensor, GModule};
use super::CohomologyError;

/// Largest group order accepted by [`h2_small`].
pub const H2_MAX_ORDER: usize = 24;

/// Normalized 2-cocycles in generator coordinates: `z = (f(s, h))` over
/// generators `s` and all `h`, with `f(x, k) = transfer[x * n + k] * z`.
struct TwoCocycleSystem {
    coords: usize,
    transfer: Vec<FpMatrix>,
    z2: Vec<Vec<u32>>,
}

impl TwoCocycleSystem {
    /// For normalized cochains, `δf(s, h, k) = 0` for all generators `s`
    /// forces `δf = 0` everywhere (the set of `g` with `δf(g, -, -) = 0`
    /// contains 1 and is stable under left multiplication by each `s`,
    /// because `δδf = 0`). The recursion
    /// `f(s h, k) = s f(h, k) + f(s, h k) - f(s, h)` walks the Cayley graph;
    /// repeated visits become constraints.
    fn new(m: &GModule) -> Self {
        let g = m.group();
        let n = g.order();
        let d = m.dim();
        let p = m.p();
        let gens = g.generators().to_vec();
        let coords = gens.len() * n * d;
        let coord = |si: usize, h: usize, i: usize| (si * n + h) * d + i;
        let e = g.identity();

        let mut transfer: Vec<Option<FpMatrix>> = vec![None; n * n];
        for k in 0..n {
            transfer[e * n + k] = Some(FpMatrix::zeros(p, d, coords));
        }
        let mut constraints = Subspace::new(p, coords);
        for si in 0..gens.len() {
            for i in 0..d {
                let mut row = vec![0; coords];
                row[coord(si, e, i)] = 1;
                constraints.insert(&row);
            }
        }
        let mut visited = vec![false; n];
        visited[e] = true;
        let mut queue = VecDeque::from([e]);
        while let Some(h) = queue.pop_front() {
            for (si, &s) in gens.iter().enumerate() {
                let x = g.mul(s, h);
                let fresh = !visited[x];
                for k in 0..n {
                    let mut cand = m.action(s).mul_unchecked(transfer[h * n + k].as_ref().unwrap());
                    let hk = g.mul(h, k);
                    for i in 0..d {
                        let a = coord(si, hk, i);
                        cand.set(i, a, add_mod(cand.get(i, a), 1, p));
                        let b = coord(si, h, i);
                        cand.set(i, b, add_mod(cand.get(i, b), p - 1, p));
                    }
                    if fresh {
                        transfer[x * n + k] = Some(cand);
                    } else {
                        let diff = cand.sub(transfer[x * n + k].as_ref().unwrap());
                        for i in 0..d {
                            constraints.insert(diff.row(i));
                        }
                    }
                }
                if fresh {
                    visited[x] = true;
                    queue.push_back(x);
                }
            }
        }
        let transfer: Vec<FpMatrix> = transfer.into_iter().map(|t| t.expect("generators generate")).collect();
        for x in 0..n {
            let t = &transfer[x * n + e];
            for i in 0..d {
                constraints.insert(t.row(i));
            }
        }
        let z2 = FpMatrix::from_vectors(p, coords, constraints.basis()).kernel_basis();
        Self { coords, transfer, z2 }
    }

    /// Coordinates of `δc` for `c` running over a basis of normalized 1-cochains.
    fn coboundary_coords(&self, m: &GModule) -> Vec<Vec<u32>> {
        let g = m.group();
        let n = g.order();
        let d = m.dim();
        let p = m.p();
        let gens = g.generators();
        let mut out = Vec::new();
        for x in (0..n).filter(|&x| x != g.identity()) {
            for j in 0..d {
                // c = e_j placed at x; (δc)(s, h) = s c(h) - c(sh) + c(s)
                let mut z = vec![0u32; self.coords];
                for (si, &s) in gens.iter().enumerate() {
                    for h in 0..n {
                        let base = (si * n + h) * d;
                        if h == x {
                            for i in 0..d {
                                z[base + i] = add_mod(z[base + i], m.action(s).get(i, j), p);
                            }
                        }
                        if g.mul(s, h) == x {
                            z[base + j] = add_mod(z[base + j], p - 1, p);
                        }
                        if s == x {
                            z[base + j] = add_mod(z[base + j], 1, p);
                        }
                    }
                }
                out.push(z);
            }
        }
        out
    }

    fn class_from_coords(&self, m: &Arc<GModule>, z: &[u32]) -> CohomologyClass {
        let values = self.transfer.iter().map(|a| a.mul_vec(z)).collect();
        CohomologyClass::degree2_unchecked(m.clone(), values).expect("shape")
    }
}

/// `H^2(G, M)` on normalized cochains.
#[derive(Debug, Clone)]
pub struct H2 {
    pub dim: usize,
    pub z2_dim: usize,
    pub b2_dim: usize,
    pub basis: Vec<CohomologyClass>,
}

pub fn h2_small(m: &Arc<GModule>) -> Result<H2, CohomologyError> {
    let n = m.group().order();
    if n > H2_MAX_ORDER {
        return Err(CohomologyError::GroupTooLarge { order: n, max: H2_MAX_ORDER });
    }
    let sys = TwoCocycleSystem::new(m);
    let b2 = Subspace::spanned_by(m.p(), sys.coords, &sys.coboundary_coords(m));
    let mut span = b2.clone();
    let mut basis = Vec::new();
    for z in &sys.z2 {
        if span.insert(z) {
            basis.push(sys.class_from_coords(m, z));
        }
    }
    Ok(H2 { dim: basis.len(), z2_dim: sys.z2.len(), b2_dim: b2.rank(), basis })
}

/// `dim H^2` from the full normalized system (all triples), as an
/// independent check of [`h2_small`] on very small groups.
pub fn h2_dim_exhaustive(m: &GModule) -> usize {
    let g = m.group();
    let n = g.order();
    let d = m.dim();
    let p = m.p();
    let e = g.identity();
    let others: Vec<usize> = (0..n).filter(|&x| x != e).collect();
    let mut slot = vec![usize::MAX; n];
    for (i, &x) in others.iter().enumerate() {
        slot[x] = i;
    }
    let pair = |a: usize, b: usize| -> Option<usize> {
        (a != e && b != e).then(|| (slot[a] * others.len() + slot[b]) * d)
    };
    let cols = others.len() * others.len() * d;
    let mut delta2 = Subspace::new(p, cols);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for i in 0..d {
                    let mut row = vec![0u32; cols];
                    if let Some(o) = pair(b, c) {
                        for j in 0..d {
                            row[o + j] = add_mod(row[o + j], m.action(a).get(i, j), p);
                        }
                    }
                    if let Some(o) = pair(g.mul(a, b), c) {
                        row[o + i] = add_mod(row[o + i], p - 1, p);
                    }
                    if let Some(o) = pair(a, g.mul(b, c)) {
                        row[o + i] = add_mod(row[o + i], 1, p);
                    }
                    if let Some(o) = pair(a, b) {
                        row[o + i] = add_mod(row[o + i], p - 1, p);
                    }
                    delta2.insert(&row);
                }
            }
        }
    }
    let mut delta1 = Subspace::new(p, cols);
    for &x in &others {
        for j in 0..d {
            let mut z = vec![0u32; cols];
            for &a in &others {
                for &b in &others {
                    let o = pair(a, b).unwrap();
                    if b == x {
                        for i in 0..d {
                            z[o + i] = add_mod(z[o + i], m.action(a).get(i, j), p);
                        }
                    }
                    if g.mul(a, b) == x {
                        z[o + j] = add_mod(z[o + j], p - 1, p);
                    }
                    if a == x {
                        z[o + j] = add_mod(z[o + j], 1, p);
                    }
                }
            }
            delta1.insert(&z);
        }
    }
    cols - delta2.rank() - delta1.rank()
}

/// Solves `δc = f` on generator rows; sufficient because a normalized
/// 2-cocycle is determined by its values `f(s, -)` on generators.
pub(crate) fn degree2_is_coboundary(f: &CohomologyClass) -> bool {
    let m = f.module();
    let g = m.group();
    let n = g.order();
    let d = m.dim();
    let p = m.p();
    let e = g.identity();
    let gens = g.generators();
    if gens.is_empty() {
        return f.values().iter().all(|v| v.iter().all(|&x| x == 0));
    }
    let others: Vec<usize> = (0..n).filter(|&x| x != e).collect();
    let mut slot = vec![usize::MAX; n];
    for (i, &x) in others.iter().enumerate() {
        slot[x] = i;
    }
    let cols = others.len() * d;
    let mut rows = Vec::with_capacity(gens.len() * n * d);
    let mut rhs = Vec::with_capacity(gens.len() * n * d);
    for &s in gens {
        for h in 0..n {
            let sh = g.mul(s, h);
            for i in 0..d {
                let mut row = vec![0u32; cols];
                if h != e {
                    for j in 0..d {
                        let c = slot[h] * d + j;
                        row[c] = add_mod(row[c], m.action(s).get(i, j), p);
                    }
                }
                if sh != e {
                    let c = slot[sh] * d + i;
                    row[c] = add_mod(row[c], p - 1, p);
                }
                let c = slot[s] * d + i;
                row[c] = add_mod(row[c], 1, p);
                rows.push(row);
                rhs.push(f.value2(s, h)[i]);
            }
        }
    }
    FpMatrix::from_vectors(p, cols, &rows).solve(&rhs).expect("shapes agree").is_some()
}

/// Cup product of degree-1 classes: `(a ∪ b)(g, h) = a(g) ⊗ g·b(h)`,
/// valued in `A ⊗ B`.
pub fn cup(a: &CohomologyClass, b: &CohomologyClass) -> Result<CohomologyClass, CohomologyError> {
    if a.degree() != 1 || b.degree() != 1 {
        return Err(CohomologyError::Degree);
    }
    let ma = a.module();
    let mb = b.module();
    let target = Arc::new(tensor(ma, mb)?);
    Ok(cup_into(a, b, target))
}

/// Cup product into a caller-supplied copy of `A ⊗ B` (so repeated products
/// share one module instance).
pub fn cup_into(a: &CohomologyClass, b: &CohomologyClass, target: Arc<GModule>) -> CohomologyClass {
    let g = a.group();
    let n = g.order();
    let p = target.p();
    let mb = b.module();
    let mut values = Vec::with_capacity(n * n);
    for x in 0..n {
        let ax = a.value(x);
        for y in 0..n {
            let gb = mb.act(x, b.value(y));
            let mut v = Vec::with_capacity(ax.len() * gb.len());
            for &u in ax {
                for &w in &gb {
                    v.push(((u as u64 * w as u64) % p as u64) as u32);
                }
            }
            values.push(v);
        }
    }
    CohomologyClass::degree2_unchecked(target, values).expect("shape")
}

/// The swap `B ⊗ A -> A ⊗ B`, as a matrix in the Kronecker bases.
pub fn swap_matrix(p: u32, dim_a: usize, dim_b: usize) -> FpMatrix {
    let n = dim_a * dim_b;
    let mut m = FpMatrix::zeros(p, n, n);
    for i in 0..dim_a {
        for j in 0..dim_b {
            m.set(i * dim_b + j, j * dim_a + i, 1);
        }
    }
    m
}

/// `a ∪ b + swap(b ∪ a)`: a coboundary by graded commutativity in degrees (1, 1).
pub fn anticommutator(a: &CohomologyClass, b: &CohomologyClass) -> Result<CohomologyClass, CohomologyError> {
    let ab = cup(a, b)?;
    let ba = cup(b, a)?;
    let swapped = ba.map_coefficients(ab.module().clone(), &swap_matrix(a.module().p(), a.module().dim(), b.module().dim()))?;
    ab.add(&swapped)
}

/// Adds `δc` for a normalized 1-cochain `c` (values per element, `c(1) = 0`).
pub fn add_degree2_coboundary(f: &CohomologyClass, c: &[Vec<u32>]) -> CohomologyClass {
    let m = f.module();
    let g = m.group();
    let n = g.order();
    let p = m.p();
    let values = (0..n * n)
        .map(|k| {
            let (x, y) = (k / n, k % n);
            let mut v = f.value2(x, y).to_vec();
            add_assign(&mut v, &m.act(x, &c[y]), p);
            let neg: Vec<u32> = c[g.mul(x, y)].iter().map(|&t| neg_mod(t, p)).collect();
            add_assign(&mut v, &neg, p);
            add_assign(&mut v, &c[x], p);
            v
        })
        .collect();
    CohomologyClass::degree2_unchecked(m.clone(), values).expect("shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::cocycle::h1;
    use crate::cohomology::module::StandardModule;
    use crate::matgroup::{borel_sl2, unipotent, MatGroup};

    fn module(g: &MatGroup, which: StandardModule) -> Arc<GModule> {
        Arc::new(which.build(g))
    }

    #[test]
    fn trivial_group_has_no_h2() {
        let g = MatGroup::close(3, &[]).unwrap();
        assert_eq!(h2_small(&module(&g, StandardModule::V)).unwrap().dim, 0);
    }

    #[test]
    fn cyclic_trivial_coefficients() {
        for p in [3, 5, 7] {
            let u = unipotent(p).unwrap();
            let h = h2_small(&module(&u, StandardModule::Trivial)).unwrap();
            assert_eq!(h.dim, 1);
            for c in &h.basis {
                assert!(c.satisfies_cocycle_identity());
            }
        }
    }

    #[test]
    fn too_large_is_rejected() {
        let g = crate::matgroup::gl2(3).unwrap();
        assert!(matches!(
            h2_small(&module(&g, StandardModule::Trivial)),
            Err(CohomologyError::GroupTooLarge { order: 48, .. })
        ));
    }

    #[test]
    fn propagation_matches_exhaustive_h2() {
        for g in [unipotent(3).unwrap(), borel_sl2(3).unwrap(), unipotent(5).unwrap()] {
            for which in StandardModule::ALL {
                let m = module(&g, which);
                assert_eq!(h2_small(&m).unwrap().dim, h2_dim_exhaustive(&m), "order {} {which:?}", g.order());
            }
        }
    }

    #[test]
    fn cup_with_zero_is_zero() {
        let u = unipotent(5).unwrap();
        let m = module(&u, StandardModule::Trivial);
        let a = h1(&m).basis[0].clone();
        let z = CohomologyClass::zero(m.clone(), 1);
        let c = cup(&a, &z).unwrap();
        assert!(c.satisfies_cocycle_identity());
        assert!(c.is_coboundary());
    }

    #[test]
    fn self_cup_vanishes_for_odd_p() {
        // a ∪ a = -(a ∪ a) in H^2, so it is zero when p is odd
        for p in [3, 5, 7] {
            let u = unipotent(p).unwrap();
            let m = module(&u, StandardModule::Trivial);
            let a = h1(&m).basis[0].clone();
            let aa = cup(&a, &a).unwrap();
            assert!(aa.satisfies_cocycle_identity());
            assert!(aa.is_coboundary());
        }
    }

    #[test]
    fn anticommutator_is_coboundary() {
        let g = borel_sl2(3).unwrap();
        let mv = module(&g, StandardModule::V);
        let mt = module(&g, StandardModule::Trivial);
        for a in &h1(&mv).basis {
            for b in &h1(&mt).basis {
                let c = anticommutator(a, b).unwrap();
                assert!(c.satisfies_cocycle_identity());
                assert!(c.is_coboundary());
            }
        }
    }

    #[test]
    fn coboundary_detection_for_degree2() {
        let u = unipotent(3).unwrap();
        let m = module(&u, StandardModule::V);
        let n = u.order();
        let e = u.table().identity();
        let c: Vec<Vec<u32>> = (0..n).map(|x| if x == e { vec![0, 0] } else { vec![x as u32 % 3, 1] }).collect();
        let f = add_degree2_coboundary(&CohomologyClass::zero(m.clone(), 2), &c);
        assert!(f.satisfies_cocycle_identity());
        assert!(f.is_coboundary());
        let h = h2_small(&m).unwrap();
        for b in &h.basis {
            assert!(!b.is_coboundary());
            assert!(add_degree2_coboundary(b, &c).equals(b).unwrap());
        }
    }
}
