use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::group::{Group, Subgroup};
use crate::linalg::{mul_mod, pow_mod, sub_mod, FpMatrix};
use crate::matgroup::MatGroup;

use super::CohomologyError;

/// A finite-dimensional `F_p[G]`-module: one invertible matrix per group element.
#[derive(Clone)]
pub struct GModule {
    group: Arc<Group>,
    p: u32,
    dim: usize,
    action: Vec<FpMatrix>,
    name: String,
}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GModule")
            .field("name", &self.name)
            .field("p", &self.p)
            .field("dim", &self.dim)
            .field("group_order", &self.group.order())
            .finish()
    }
}

impl PartialEq for GModule {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.dim == other.dim
            && (Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group)
            && self.action == other.action
    }
}

impl GModule {
    /// Checks `action(1) = 1` and `action(gh) = action(g) action(h)` on the
    /// whole multiplication table.
    pub fn new(group: Arc<Group>, p: u32, dim: usize, action: Vec<FpMatrix>, name: impl Into<String>) -> Result<Self, CohomologyError> {
        crate::linalg::check_modulus(p)?;
        if action.len() != group.order() {
            return Err(CohomologyError::InvalidModule(format!(
                "{} action matrices for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        if action.iter().any(|a| a.rows() != dim || a.cols() != dim || a.p() != p) {
            return Err(CohomologyError::InvalidModule("action matrix of the wrong shape".into()));
        }
        if !action[group.identity()].is_identity() {
            return Err(CohomologyError::InvalidModule("identity does not act trivially".into()));
        }
        let n = group.order();
        for g in 0..n {
            for h in 0..n {
                if action[g].mul_unchecked(&action[h]) != action[group.mul(g, h)] {
                    return Err(CohomologyError::InvalidModule(format!("action is not multiplicative at ({g}, {h})")));
                }
            }
        }
        Ok(Self { group, p, dim, action, name: name.into() })
    }

    /// Extends matrices given on the group's generators to the whole group
    /// and validates the result.
    pub fn from_generator_action(
        group: Arc<Group>,
        p: u32,
        dim: usize,
        generator_action: &[FpMatrix],
        name: impl Into<String>,
    ) -> Result<Self, CohomologyError> {
        let gens = group.generators().to_vec();
        if generator_action.len() != gens.len() {
            return Err(CohomologyError::InvalidModule(format!(
                "{} matrices for {} generators",
                generator_action.len(),
                gens.len()
            )));
        }
        if generator_action.iter().any(|a| a.rows() != dim || a.cols() != dim || a.p() != p) {
            return Err(CohomologyError::InvalidModule("action matrix of the wrong shape".into()));
        }
        let n = group.order();
        let mut action: Vec<Option<FpMatrix>> = vec![None; n];
        action[group.identity()] = Some(FpMatrix::identity(p, dim));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(h) = queue.pop_front() {
            for (s, a) in gens.iter().zip(generator_action) {
                let x = group.mul(*s, h);
                if action[x].is_none() {
                    action[x] = Some(a.mul_unchecked(action[h].as_ref().unwrap()));
                    queue.push_back(x);
                }
            }
        }
        let action = action.into_iter().map(|a| a.expect("generators generate")).collect();
        Self::new(group, p, dim, action, name)
    }

    pub fn trivial(group: Arc<Group>, p: u32, dim: usize) -> Result<Self, CohomologyError> {
        let n = group.order();
        Self::new(group, p, dim, vec![FpMatrix::identity(p, dim); n], if dim == 1 { "trivial".to_string() } else { format!("trivial^{dim}") })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn action(&self, g: usize) -> &FpMatrix {
        &self.action[g]
    }

    pub fn act(&self, g: usize, v: &[u32]) -> Vec<u32> {
        self.action[g].mul_vec(v)
    }

    /// The same representation viewed on a subgroup.
    pub fn restrict(&self, sub: &Subgroup) -> Result<GModule, CohomologyError> {
        check_embedding(&self.group, sub)?;
        let action = sub.embedding.iter().map(|&g| self.action[g].clone()).collect();
        Ok(Self {
            group: Arc::new(sub.group.clone()),
            p: self.p,
            dim: self.dim,
            action,
            name: self.name.clone(),
        })
    }

    /// `H^0`: basis of the fixed vectors, as the kernel of the stacked
    /// `action(s) - 1` over generators.
    pub fn invariants(&self) -> Vec<Vec<u32>> {
        let gens = self.group.generators();
        if gens.is_empty() {
            return FpMatrix::zeros(self.p, 0, self.dim).kernel_basis();
        }
        let id = FpMatrix::identity(self.p, self.dim);
        let rows: Vec<Vec<u32>> = gens
            .iter()
            .flat_map(|&s| {
                let d = self.action[s].sub(&id);
                (0..self.dim).map(move |i| d.row(i).to_vec()).collect::<Vec<_>>()
            })
            .collect();
        FpMatrix::from_vectors(self.p, self.dim, &rows).kernel_basis()
    }
}

pub(crate) fn check_embedding(parent: &Group, sub: &Subgroup) -> Result<(), CohomologyError> {
    let n = sub.group.order();
    if sub.embedding.len() != n || sub.embedding.iter().any(|&g| g >= parent.order()) {
        return Err(CohomologyError::NotSubgroup);
    }
    for a in 0..n {
        for b in 0..n {
            if sub.embedding[sub.group.mul(a, b)] != parent.mul(sub.embedding[a], sub.embedding[b]) {
                return Err(CohomologyError::NotSubgroup);
            }
        }
    }
    Ok(())
}

/// Builds the [`Subgroup`] view of `h` inside `g` for two matrix groups.
pub fn matrix_subgroup(g: &MatGroup, h: &MatGroup) -> Result<Subgroup, CohomologyError> {
    let emb = h.embedding_into(g).map_err(|_| CohomologyError::NotSubgroup)?;
    g.table().subgroup(&emb).map_err(|_| CohomologyError::NotSubgroup)
}

/// `V = F_p^2` with `G ⊆ GL_2(F_p)` acting by matrix multiplication.
pub fn standard_module(g: &MatGroup) -> GModule {
    let action = g.elements().iter().map(|e| e.to_matrix()).collect();
    GModule::new(g.table().clone(), g.p(), 2, action, "V").expect("inclusion is a representation")
}

fn index_pairs(n: usize, strict: bool) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i..n {
            if !strict || i < j {
                v.push((i, j));
            }
        }
    }
    v
}

/// Symmetric square, basis `e_i e_j` for `i <= j` in lexicographic order.
pub fn sym2(m: &GModule) -> GModule {
    let p = m.p;
    let basis = index_pairs(m.dim, false);
    let pos = |k: usize, l: usize| basis.iter().position(|&x| x == (k.min(l), k.max(l))).unwrap();
    let action = m
        .action
        .iter()
        .map(|g| {
            let mut out = FpMatrix::zeros(p, basis.len(), basis.len());
            for (col, &(i, j)) in basis.iter().enumerate() {
                // (g e_i)(g e_j) = sum_{k,l} g_ki g_lj e_k e_l
                for k in 0..m.dim {
                    for l in 0..m.dim {
                        let c = mul_mod(g.get(k, i), g.get(l, j), p);
                        if c != 0 {
                            let r = pos(k, l);
                            out.set(r, col, (out.get(r, col) + c) % p);
                        }
                    }
                }
            }
            out
        })
        .collect();
    GModule { group: m.group.clone(), p, dim: basis.len(), action, name: format!("sym2({})", m.name) }
}

/// Exterior square, basis `e_i ∧ e_j` for `i < j`.
pub fn lambda2(m: &GModule) -> GModule {
    let p = m.p;
    let basis = index_pairs(m.dim, true);
    let action = m
        .action
        .iter()
        .map(|g| {
            let mut out = FpMatrix::zeros(p, basis.len(), basis.len());
            for (col, &(i, j)) in basis.iter().enumerate() {
                for (row, &(k, l)) in basis.iter().enumerate() {
                    let v = sub_mod(mul_mod(g.get(k, i), g.get(l, j), p), mul_mod(g.get(l, i), g.get(k, j), p), p);
                    out.set(row, col, v);
                }
            }
            out
        })
        .collect();
    GModule { group: m.group.clone(), p, dim: basis.len(), action, name: format!("lambda2({})", m.name) }
}

/// `A ⊗ B`, basis `a_i ⊗ b_j` at index `i * dim(B) + j`.
pub fn tensor(a: &GModule, b: &GModule) -> Result<GModule, CohomologyError> {
    if a.p != b.p || !(Arc::ptr_eq(&a.group, &b.group) || *a.group == *b.group) {
        return Err(CohomologyError::GroupMismatch);
    }
    let action = a.action.iter().zip(&b.action).map(|(x, y)| x.kronecker(y)).collect();
    Ok(GModule { group: a.group.clone(), p: a.p, dim: a.dim * b.dim, action, name: format!("{}⊗{}", a.name, b.name) })
}

/// Multiplies each `action(g)` by `chi(g)^k`, where `chi` is a character
/// given by its values (e.g. the determinant).
pub fn twist(m: &GModule, chi: &[u32], k: i64) -> Result<GModule, CohomologyError> {
    let p = m.p;
    if chi.len() != m.group.order() || chi.iter().any(|&c| c % p == 0) {
        return Err(CohomologyError::InvalidModule("character values must be units, one per element".into()));
    }
    let g = &m.group;
    for a in 0..g.order() {
        for b in 0..g.order() {
            if chi[g.mul(a, b)] != mul_mod(chi[a], chi[b], p) {
                return Err(CohomologyError::InvalidModule("twist is not by a character".into()));
            }
        }
    }
    let e = k.rem_euclid(p as i64 - 1) as u64;
    let action = m.action.iter().zip(chi).map(|(a, &c)| a.scale(pow_mod(c, e, p))).collect();
    Ok(GModule { group: m.group.clone(), p, dim: m.dim, action, name: format!("{}(det^{k})", m.name) })
}

/// `det_twist` for a matrix group: twist by `det^k`.
pub fn det_twist(g: &MatGroup, m: &GModule, k: i64) -> Result<GModule, CohomologyError> {
    twist(m, &g.determinants(), k)
}

/// `sym^2(V) ⊗ det^-1`.
pub fn ad(g: &MatGroup) -> GModule {
    det_twist(g, &sym2(&standard_module(g)), -1).expect("det is a character").with_name("ad")
}

/// The five coefficient systems used throughout the scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum StandardModule {
    Trivial,
    V,
    Sym2,
    Ad,
    VTensorV,
}

impl StandardModule {
    pub const ALL: [StandardModule; 5] = [Self::Trivial, Self::V, Self::Sym2, Self::Ad, Self::VTensorV];

    pub fn name(self) -> &'static str {
        match self {
            Self::Trivial => "trivial",
            Self::V => "V",
            Self::Sym2 => "sym2",
            Self::Ad => "ad",
            Self::VTensorV => "VxV",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "trivial" | "fp" => Some(Self::Trivial),
            "v" | "standard" => Some(Self::V),
            "sym2" | "sym" => Some(Self::Sym2),
            "ad" => Some(Self::Ad),
            "vxv" | "v⊗v" | "tensor" | "v*v" => Some(Self::VTensorV),
            _ => None,
        }
    }

    pub fn build(self, g: &MatGroup) -> GModule {
        let v = standard_module(g);
        let m = match self {
            Self::Trivial => GModule::trivial(g.table().clone(), g.p(), 1).expect("trivial module"),
            Self::V => v,
            Self::Sym2 => sym2(&v),
            Self::Ad => ad(g),
            Self::VTensorV => tensor(&v, &v).expect("same group"),
        };
        m.with_name(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{gl2, sl2, unipotent};

    #[test]
    fn dimensions_of_constructions() {
        let g = gl2(3).unwrap();
        let v = standard_module(&g);
        assert_eq!(sym2(&v).dim(), 3);
        assert_eq!(lambda2(&v).dim(), 1);
        assert_eq!(tensor(&v, &v).unwrap().dim(), 4);
        // validated through the full multiplication table
        let s = sym2(&v);
        assert!(GModule::new(s.group.clone(), 3, 3, s.action.clone(), "check").is_ok());
        let l = lambda2(&v);
        assert!(GModule::new(l.group.clone(), 3, 1, l.action.clone(), "check").is_ok());
    }

    #[test]
    fn lambda2_is_determinant() {
        let g = gl2(5).unwrap();
        let l = lambda2(&standard_module(&g));
        for (i, e) in g.elements().iter().enumerate() {
            assert_eq!(l.action(i).get(0, 0), e.det());
        }
    }

    #[test]
    fn ad_agrees_with_sym2_on_sl2() {
        let g = gl2(5).unwrap();
        let a = ad(&g);
        let s = sym2(&standard_module(&g));
        for (i, e) in g.elements().iter().enumerate() {
            if e.det() == 1 {
                assert_eq!(a.action(i), s.action(i));
            } else {
                assert_ne!(a.action(i), s.action(i));
            }
        }
    }

    #[test]
    fn tensor_square_decomposes_dimensionwise() {
        let g = sl2(3).unwrap();
        let v = standard_module(&g);
        let vv = tensor(&v, &v).unwrap();
        assert_eq!(vv.dim(), sym2(&v).dim() + lambda2(&v).dim());
    }

    #[test]
    fn invariants_examples() {
        let g = sl2(3).unwrap();
        assert_eq!(GModule::trivial(g.table().clone(), 3, 2).unwrap().invariants().len(), 2);
        // brute force: no nonzero vector of F_3^2 is fixed by all 24 elements
        let fixed = (1..9u32)
            .map(|k| [k % 3, k / 3])
            .filter(|v| g.elements().iter().all(|e| e.apply(*v) == *v))
            .count();
        assert_eq!(fixed, 0);
        assert!(standard_module(&g).invariants().is_empty());
        // sym2 under U: kernel of (u - 1) for the single unipotent action
        let u = unipotent(3).unwrap();
        let s = sym2(&standard_module(&u));
        let gen = u.table().generators()[0];
        let expected = s.action(gen).sub(&FpMatrix::identity(3, 3)).kernel_basis().len();
        assert_eq!(s.invariants().len(), expected);
        assert_eq!(expected, 1);
    }

    #[test]
    fn rejects_bad_modules() {
        let g = unipotent(3).unwrap();
        let bad = vec![FpMatrix::identity(3, 1), FpMatrix::identity(3, 1).scale(2), FpMatrix::identity(3, 1)];
        assert!(GModule::new(g.table().clone(), 3, 1, bad, "bad").is_err());
        let other = sl2(3).unwrap();
        assert_eq!(tensor(&standard_module(&g), &standard_module(&other)), Err(CohomologyError::GroupMismatch));
    }
}
