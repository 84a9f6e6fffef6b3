use std::collections::VecDeque;
use std::sync::Arc;

use crate::group::{Group, Quotient, Subgroup};
use crate::linalg::{add_mod, mul_mod, neg_mod, FpMatrix, Subspace};

use super::module::{check_embedding, GModule};
use super::CohomologyError;

/// A 1- or 2-cocycle with values in `module`, considered up to coboundaries.
///
/// Degree-1 values are indexed by group element; degree-2 values by
/// `g * n + h`. Degree-2 representatives are always normalized
/// (`f(1, h) = f(g, 1) = 0`).
#[derive(Debug, Clone)]
pub struct CohomologyClass {
    degree: u8,
    module: Arc<GModule>,
    values: Vec<Vec<u32>>,
}

fn same_module(a: &Arc<GModule>, b: &Arc<GModule>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl CohomologyClass {
    /// A degree-1 class; the cocycle identity `f(gh) = f(g) + g f(h)` is
    /// checked for every pair.
    pub fn degree1(module: Arc<GModule>, values: Vec<Vec<u32>>) -> Result<Self, CohomologyError> {
        let cls = Self::degree1_unchecked(module, values)?;
        if !cls.satisfies_cocycle_identity() {
            return Err(CohomologyError::NotCocycle);
        }
        Ok(cls)
    }

    /// A normalized degree-2 class; the cocycle identity is checked for every triple.
    pub fn degree2(module: Arc<GModule>, values: Vec<Vec<u32>>) -> Result<Self, CohomologyError> {
        let cls = Self::degree2_unchecked(module, values)?;
        if !cls.satisfies_cocycle_identity() {
            return Err(CohomologyError::NotCocycle);
        }
        Ok(cls)
    }

    pub(crate) fn degree1_unchecked(module: Arc<GModule>, values: Vec<Vec<u32>>) -> Result<Self, CohomologyError> {
        let n = module.group().order();
        if values.len() != n || values.iter().any(|v| v.len() != module.dim()) {
            return Err(CohomologyError::Shape);
        }
        Ok(Self { degree: 1, module, values })
    }

    pub(crate) fn degree2_unchecked(module: Arc<GModule>, values: Vec<Vec<u32>>) -> Result<Self, CohomologyError> {
        let n = module.group().order();
        if values.len() != n * n || values.iter().any(|v| v.len() != module.dim()) {
            return Err(CohomologyError::Shape);
        }
        Ok(Self { degree: 2, module, values })
    }

    pub fn zero(module: Arc<GModule>, degree: u8) -> Self {
        let n = module.group().order();
        let len = if degree == 1 { n } else { n * n };
        let values = vec![vec![0; module.dim()]; len];
        Self { degree, module, values }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn module(&self) -> &Arc<GModule> {
        &self.module
    }

    pub fn group(&self) -> &Arc<Group> {
        self.module.group()
    }

    pub fn values(&self) -> &[Vec<u32>] {
        &self.values
    }

    /// `f(g)` for degree 1.
    pub fn value(&self, g: usize) -> &[u32] {
        debug_assert_eq!(self.degree, 1);
        &self.values[g]
    }

    /// `f(g, h)` for degree 2.
    pub fn value2(&self, g: usize, h: usize) -> &[u32] {
        debug_assert_eq!(self.degree, 2);
        &self.values[g * self.group().order() + h]
    }

    /// Checks the defining identity of the representative on the full table.
    pub fn satisfies_cocycle_identity(&self) -> bool {
        let g = self.group();
        let n = g.order();
        let p = self.module.p();
        let m = &self.module;
        match self.degree {
            1 => (0..n).all(|a| {
                let ga_fb_cache: Vec<Vec<u32>> = (0..n).map(|b| m.act(a, &self.values[b])).collect();
                (0..n).all(|b| {
                    let lhs = &self.values[g.mul(a, b)];
                    let rhs = add_vec(&self.values[a], &ga_fb_cache[b], p);
                    *lhs == rhs
                })
            }),
            _ => {
                let e = g.identity();
                if (0..n).any(|x| self.value2(e, x).iter().any(|&v| v != 0) || self.value2(x, e).iter().any(|&v| v != 0)) {
                    return false;
                }
                (0..n).all(|a| {
                    (0..n).all(|b| {
                        let ab = g.mul(a, b);
                        (0..n).all(|c| {
                            // a f(b,c) - f(ab,c) + f(a,bc) - f(a,b) = 0
                            let mut t = m.act(a, self.value2(b, c));
                            sub_assign(&mut t, self.value2(ab, c), p);
                            add_assign(&mut t, self.value2(a, g.mul(b, c)), p);
                            sub_assign(&mut t, self.value2(a, b), p);
                            t.iter().all(|&x| x == 0)
                        })
                    })
                })
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), CohomologyError> {
        if self.degree != other.degree || !same_module(&self.module, &other.module) {
            return Err(CohomologyError::GroupMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CohomologyError> {
        self.check_compatible(other)?;
        let p = self.module.p();
        let values = self.values.iter().zip(&other.values).map(|(a, b)| add_vec(a, b, p)).collect();
        Ok(Self { degree: self.degree, module: self.module.clone(), values })
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.module.p();
        let values = self.values.iter().map(|v| v.iter().map(|&x| mul_mod(x, c % p, p)).collect()).collect();
        Self { degree: self.degree, module: self.module.clone(), values }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CohomologyError> {
        self.add(&other.scale(self.module.p() - 1))
    }

    /// Adds the coboundary of `v` (degree 1: `g -> (g - 1) v`).
    pub fn add_coboundary(&self, v: &[u32]) -> Self {
        assert_eq!(self.degree, 1, "only degree-1 coboundaries of vectors");
        let p = self.module.p();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(g, f)| {
                let mut t = add_vec(f, &self.module.act(g, v), p);
                sub_assign(&mut t, v, p);
                t
            })
            .collect();
        Self { degree: 1, module: self.module.clone(), values }
    }

    /// Decided by solving for a coboundary, never by comparing representatives.
    pub fn is_coboundary(&self) -> bool {
        match self.degree {
            1 => coboundary_relations(std::slice::from_ref(self)).len() == 1,
            _ => super::h2::degree2_is_coboundary(self),
        }
    }

    pub fn is_zero_class(&self) -> bool {
        self.is_coboundary()
    }

    /// Class equality: the difference is a coboundary.
    pub fn equals(&self, other: &Self) -> Result<bool, CohomologyError> {
        Ok(self.sub(other)?.is_coboundary())
    }

    /// Pointwise pull-back to a subgroup.
    pub fn restrict(&self, sub: &Subgroup) -> Result<Self, CohomologyError> {
        check_embedding(self.group(), sub)?;
        let module = Arc::new(self.module.restrict(sub)?);
        let n = self.group().order();
        let values = match self.degree {
            1 => sub.embedding.iter().map(|&g| self.values[g].clone()).collect(),
            _ => sub
                .embedding
                .iter()
                .flat_map(|&a| sub.embedding.iter().map(move |&b| a * n + b))
                .map(|k| self.values[k].clone())
                .collect(),
        };
        Ok(Self { degree: self.degree, module, values })
    }

    /// Push-forward along a `G`-equivariant linear map `target <- module`.
    pub fn map_coefficients(&self, target: Arc<GModule>, map: &FpMatrix) -> Result<Self, CohomologyError> {
        if map.rows() != target.dim() || map.cols() != self.module.dim() {
            return Err(CohomologyError::Shape);
        }
        if !(Arc::ptr_eq(target.group(), self.group()) || **target.group() == **self.group()) {
            return Err(CohomologyError::GroupMismatch);
        }
        for g in 0..self.group().order() {
            if target.action(g).mul_unchecked(map) != map.mul_unchecked(self.module.action(g)) {
                return Err(CohomologyError::NotEquivariant);
            }
        }
        let values = self.values.iter().map(|v| map.mul_vec(v)).collect();
        Ok(Self { degree: self.degree, module: target, values })
    }
}

pub(crate) fn add_vec(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| add_mod(x, y, p)).collect()
}

pub(crate) fn add_assign(a: &mut [u32], b: &[u32], p: u32) {
    for (x, &y) in a.iter_mut().zip(b) {
        *x = add_mod(*x, y, p);
    }
}

pub(crate) fn sub_assign(a: &mut [u32], b: &[u32], p: u32) {
    for (x, &y) in a.iter_mut().zip(b) {
        *x = add_mod(*x, neg_mod(y, p), p);
    }
}

/// Basis of `{c : sum c_i f_i is a coboundary}` for degree-1 classes over
/// the same module. Uses the generators of the group only: a cocycle is
/// determined by its values on generators.
pub fn coboundary_relations(classes: &[CohomologyClass]) -> Vec<Vec<u32>> {
    let Some(first) = classes.first() else {
        return Vec::new();
    };
    let m = first.module();
    let p = m.p();
    let d = m.dim();
    let k = classes.len();
    let gens = m.group().generators();
    if gens.is_empty() {
        // trivial group: every 1-cocycle vanishes
        return (0..k).map(|i| unit_vec(k, i)).collect();
    }
    let id = FpMatrix::identity(p, d);
    let mut rows = Vec::with_capacity(gens.len() * d);
    for &s in gens {
        let delta = m.action(s).sub(&id);
        for i in 0..d {
            let mut row = Vec::with_capacity(k + d);
            row.extend(classes.iter().map(|c| c.value(s)[i]));
            row.extend(delta.row(i).iter().map(|&x| neg_mod(x, p)));
            rows.push(row);
        }
    }
    let ker = FpMatrix::from_vectors(p, k + d, &rows).kernel_basis();
    let mut span = Subspace::new(p, k);
    for v in ker {
        span.insert(&v[..k]);
    }
    span.basis().to_vec()
}

pub(crate) fn unit_vec(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// `Z^1` in generator coordinates: `z = (f(s))_{s in S}` concatenated, and
/// `f(g) = transfer[g] * z`.
#[derive(Debug, Clone)]
pub(crate) struct OneCocycleSystem {
    pub gens: Vec<usize>,
    pub coords: usize,
    pub transfer: Vec<FpMatrix>,
    pub z1: Vec<Vec<u32>>,
}

impl OneCocycleSystem {
    /// Walks the Cayley graph from the identity along `h -> s h`.
    /// Tree edges define `f(s h) = f(s) + s f(h)`; every other edge becomes
    /// a linear constraint on `z`. Imposing the identity for all `s` in a
    /// generating set and all `h` is equivalent to the full cocycle identity.
    pub fn new(m: &GModule) -> Self {
        let g = m.group();
        let p = m.p();
        let d = m.dim();
        let gens = g.generators().to_vec();
        let coords = gens.len() * d;
        let n = g.order();
        let mut transfer: Vec<Option<FpMatrix>> = vec![None; n];
        transfer[g.identity()] = Some(FpMatrix::zeros(p, d, coords));
        let mut constraints = Subspace::new(p, coords);
        let mut queue = VecDeque::from([g.identity()]);
        while let Some(h) = queue.pop_front() {
            let ah = transfer[h].clone().unwrap();
            for (si, &s) in gens.iter().enumerate() {
                let mut cand = m.action(s).mul_unchecked(&ah);
                for i in 0..d {
                    let c = si * d + i;
                    cand.set(i, c, cand.get(i, c) + 1);
                }
                let x = g.mul(s, h);
                match &transfer[x] {
                    None => {
                        transfer[x] = Some(cand);
                        queue.push_back(x);
                    }
                    Some(ax) => {
                        let diff = cand.sub(ax);
                        for i in 0..d {
                            constraints.insert(diff.row(i));
                        }
                    }
                }
            }
        }
        let transfer: Vec<FpMatrix> = transfer.into_iter().map(|t| t.expect("generators generate")).collect();
        let z1 = FpMatrix::from_vectors(p, coords, constraints.basis()).kernel_basis();
        Self { gens, coords, transfer, z1 }
    }

    /// Coordinates of the coboundary of each basis vector of `M`.
    pub fn coboundary_coords(&self, m: &GModule) -> Vec<Vec<u32>> {
        let d = m.dim();
        let p = m.p();
        let id = FpMatrix::identity(p, d);
        (0..d)
            .map(|j| {
                let mut z = Vec::with_capacity(self.coords);
                for &s in &self.gens {
                    let delta = m.action(s).sub(&id);
                    z.extend((0..d).map(|i| delta.get(i, j)));
                }
                z
            })
            .collect()
    }

    pub fn class_from_coords(&self, m: &Arc<GModule>, z: &[u32]) -> CohomologyClass {
        let values = self.transfer.iter().map(|a| a.mul_vec(z)).collect();
        CohomologyClass { degree: 1, module: m.clone(), values }
    }
}

/// `H^1(G, M)`: dimension and representatives of a basis.
#[derive(Debug, Clone)]
pub struct H1 {
    pub dim: usize,
    pub z1_dim: usize,
    pub b1_dim: usize,
    pub basis: Vec<CohomologyClass>,
}

/// `Z^1 / B^1`. Representatives are full functions on the element table.
pub fn h1(m: &Arc<GModule>) -> H1 {
    let sys = OneCocycleSystem::new(m);
    let b1 = Subspace::spanned_by(m.p(), sys.coords, &sys.coboundary_coords(m));
    let mut span = b1.clone();
    let mut basis = Vec::new();
    for z in &sys.z1 {
        if span.insert(z) {
            basis.push(sys.class_from_coords(m, z));
        }
    }
    H1 { dim: basis.len(), z1_dim: sys.z1.len(), b1_dim: b1.rank(), basis }
}

/// `dim H^1` from the unreduced system: one unknown vector per element and
/// the cocycle identity imposed for every ordered pair. Independent of the
/// generator-propagation route used by [`h1`]; quadratic in `|G|`, so meant
/// for small groups.
pub fn h1_dim_exhaustive(m: &GModule) -> usize {
    let g = m.group();
    let n = g.order();
    let d = m.dim();
    let p = m.p();
    let cols = n * d;
    let mut rows = Subspace::new(p, cols);
    for a in 0..n {
        let act = m.action(a);
        for b in 0..n {
            let ab = g.mul(a, b);
            // f(ab) - f(a) - a f(b) = 0, one row per coordinate
            for i in 0..d {
                let mut row = vec![0u32; cols];
                row[ab * d + i] = add_mod(row[ab * d + i], 1, p);
                row[a * d + i] = add_mod(row[a * d + i], p - 1, p);
                for j in 0..d {
                    let c = act.get(i, j);
                    if c != 0 {
                        row[b * d + j] = add_mod(row[b * d + j], neg_mod(c, p), p);
                    }
                }
                rows.insert(&row);
            }
        }
    }
    let z1 = cols - rows.rank();
    let b1 = d - m.invariants().len();
    z1 - b1
}

/// Basis of the classes in `H^1(G, M)` (given as a basis `h1.basis`) whose
/// restriction to `sub` is zero, as coefficient vectors on that basis.
pub fn restriction_kernel(h1: &H1, sub: &Subgroup) -> Result<Vec<Vec<u32>>, CohomologyError> {
    let restricted: Vec<CohomologyClass> = h1.basis.iter().map(|c| c.restrict(sub)).collect::<Result<_, _>>()?;
    Ok(coboundary_relations(&restricted))
}

/// Everything needed to inflate from `H^1(G/N, M^N)` to `H^1(G, M)`.
#[derive(Debug, Clone)]
pub struct InflationData {
    pub quotient: Quotient,
    /// Columns form a basis of `M^N` inside `M`.
    pub inclusion: FpMatrix,
    /// `M^N` as a `G/N`-module.
    pub fixed_module: Arc<GModule>,
    pub target: Arc<GModule>,
}

impl InflationData {
    pub fn new(m: &Arc<GModule>, normal: &[usize]) -> Result<Self, CohomologyError> {
        let g = m.group();
        let quotient = g.quotient(normal).map_err(|_| CohomologyError::NotNormal)?;
        let p = m.p();
        let d = m.dim();
        let id = FpMatrix::identity(p, d);
        let mut rows = Vec::new();
        for &x in normal {
            let delta = m.action(x).sub(&id);
            rows.extend((0..d).map(|i| delta.row(i).to_vec()));
        }
        let fixed = FpMatrix::from_vectors(p, d, &rows).kernel_basis();
        let r = fixed.len();
        let inclusion = FpMatrix::from_vectors(p, d, &fixed).transpose();
        // lift of each coset: first element mapping to it
        let q = &quotient.group;
        let mut lift = vec![usize::MAX; q.order()];
        for (x, &c) in quotient.projection.iter().enumerate() {
            if lift[c] == usize::MAX {
                lift[c] = x;
            }
        }
        let mut action = Vec::with_capacity(q.order());
        for &x in &lift {
            let image = m.action(x).mul_unchecked(&inclusion);
            let mut cols = Vec::with_capacity(r);
            for j in 0..r {
                let col: Vec<u32> = (0..d).map(|i| image.get(i, j)).collect();
                let sol = inclusion.solve(&col)?.ok_or(CohomologyError::NotEquivariant)?;
                cols.push(sol);
            }
            action.push(FpMatrix::from_vectors(p, r, &cols).transpose());
        }
        let fixed_module = GModule::new(Arc::new(q.clone()), p, r, action, format!("{}^N", m.name()))?;
        Ok(Self { quotient, inclusion, fixed_module: Arc::new(fixed_module), target: m.clone() })
    }

    pub fn inflate(&self, cls: &CohomologyClass) -> Result<CohomologyClass, CohomologyError> {
        inflation(cls, &self.target, &self.quotient.projection, &self.inclusion)
    }
}

/// Inflation along a surjection `G -> Q` (given on indices) and an
/// equivariant inclusion of coefficients `M_Q -> M`.
pub fn inflation(
    cls: &CohomologyClass,
    target: &Arc<GModule>,
    projection: &[usize],
    inclusion: &FpMatrix,
) -> Result<CohomologyClass, CohomologyError> {
    let g = target.group();
    let q = cls.group();
    if projection.len() != g.order() || projection.iter().any(|&x| x >= q.order()) {
        return Err(CohomologyError::NotSurjection);
    }
    let mut hit = vec![false; q.order()];
    for &x in projection {
        hit[x] = true;
    }
    if hit.iter().any(|&h| !h) {
        return Err(CohomologyError::NotSurjection);
    }
    for a in 0..g.order() {
        for b in 0..g.order() {
            if projection[g.mul(a, b)] != q.mul(projection[a], projection[b]) {
                return Err(CohomologyError::NotSurjection);
            }
        }
    }
    if inclusion.rows() != target.dim() || inclusion.cols() != cls.module().dim() {
        return Err(CohomologyError::Shape);
    }
    for x in 0..g.order() {
        if target.action(x).mul_unchecked(inclusion) != inclusion.mul_unchecked(cls.module().action(projection[x])) {
            return Err(CohomologyError::NotEquivariant);
        }
    }
    let n = g.order();
    let values = match cls.degree() {
        1 => (0..n).map(|x| inclusion.mul_vec(cls.value(projection[x]))).collect(),
        _ => (0..n * n)
            .map(|k| inclusion.mul_vec(cls.value2(projection[k / n], projection[k % n])))
            .collect(),
    };
    Ok(CohomologyClass { degree: cls.degree(), module: target.clone(), values })
}
