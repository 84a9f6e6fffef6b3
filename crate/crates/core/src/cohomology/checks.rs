use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::linalg::{FpMatrix, Subspace};
use crate::matgroup::{borel_sl2, sl2, MatGroup};

use super::cocycle::{coboundary_relations, h1, restriction_kernel, CohomologyClass, InflationData, H1};
use super::module::{matrix_subgroup, GModule, StandardModule};
use super::CohomologyError;

/// Classes of `H^1(G, M)` that vanish on every cyclic subgroup.
#[derive(Debug, Clone)]
pub struct Sha1 {
    pub dim: usize,
    pub h1_dim: usize,
    pub cyclic_subgroups: usize,
    pub basis: Vec<CohomologyClass>,
}

/// A 1-cocycle on `⟨c⟩` is a coboundary iff `f(c) ∈ im(c - 1)`, so the
/// locally trivial classes are cut out by `P_c · f(c) = 0` where the rows of
/// `P_c` annihilate `im(c - 1)`.
pub fn sha1_of(m: &GModule, h: &H1) -> Vec<Vec<u32>> {
    let g = m.group();
    let p = m.p();
    let d = m.dim();
    let r = h.basis.len();
    if r == 0 {
        return Vec::new();
    }
    let id = FpMatrix::identity(p, d);
    let mut rows = Subspace::new(p, r);
    for (c, _) in g.cyclic_subgroups() {
        let annihilators = m.action(c).sub(&id).transpose().kernel_basis();
        for a in &annihilators {
            let row: Vec<u32> = h
                .basis
                .iter()
                .map(|f| {
                    let v = f.value(c);
                    a.iter().zip(v).fold(0u64, |s, (&x, &y)| (s + x as u64 * y as u64) % p as u64) as u32
                })
                .collect();
            rows.insert(&row);
        }
    }
    FpMatrix::from_vectors(p, r, rows.basis()).kernel_basis()
}

pub fn sha1(m: &Arc<GModule>) -> Sha1 {
    let h = h1(m);
    let coeffs = sha1_of(m, &h);
    let basis = coeffs.iter().map(|c| combine(m, &h.basis, c)).collect::<Vec<_>>();
    Sha1 { dim: basis.len(), h1_dim: h.dim, cyclic_subgroups: m.group().cyclic_subgroups().len(), basis }
}

fn combine(m: &Arc<GModule>, basis: &[CohomologyClass], coeffs: &[u32]) -> CohomologyClass {
    let mut acc = CohomologyClass::zero(m.clone(), 1);
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.add(&b.scale(c)).expect("same module");
        }
    }
    acc
}

/// Restriction `H^1(SL_2(F_p), M) -> H^1(B ∩ SL_2(F_p), M)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerreReport {
    pub p: u32,
    pub module: String,
    pub h1_sl2: usize,
    pub h1_borel: usize,
    pub kernel_dim: usize,
    pub sylow_kernel_dim: usize,
    pub injective: bool,
}

pub fn serre_restriction_check(p: u32, which: StandardModule) -> Result<SerreReport, CohomologyError> {
    if p != 3 && p != 5 {
        return Err(CohomologyError::UnsupportedPrime(p));
    }
    let g = sl2(p)?;
    let b = borel_sl2(p)?;
    let m = Arc::new(which.build(&g));
    let h = h1(&m);
    let sub = matrix_subgroup(&g, &b)?;
    let kernel = restriction_kernel(&h, &sub)?;
    let h1_borel = h1(&Arc::new(m.restrict(&sub)?)).dim;
    let sylow = matrix_subgroup(&g, &g.sylow_p())?;
    let sylow_kernel = restriction_kernel(&h, &sylow)?;
    Ok(SerreReport {
        p,
        module: which.name().to_string(),
        h1_sl2: h.dim,
        h1_borel,
        kernel_dim: kernel.len(),
        sylow_kernel_dim: sylow_kernel.len(),
        injective: kernel.is_empty(),
    })
}

/// `0 -> H^1(G/N, M^N) -> H^1(G, M) -> H^1(N, M)` at the first two terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub group_order: usize,
    pub normal_order: usize,
    pub fixed_dim: usize,
    pub h1_quotient: usize,
    pub h1_group: usize,
    pub h1_normal: usize,
    pub inflation_rank: usize,
    pub restriction_kernel_dim: usize,
    pub inflation_injective: bool,
    pub image_in_kernel: bool,
    pub exact: bool,
}

pub fn inf_res_exactness_check(m: &Arc<GModule>, normal: &[usize]) -> Result<ExactnessReport, CohomologyError> {
    let g = m.group();
    let data = InflationData::new(m, normal)?;
    let hq = h1(&data.fixed_module);
    let hg = h1(m);
    let sub = g.subgroup(normal).map_err(|_| CohomologyError::NotNormal)?;
    let hn = h1(&Arc::new(m.restrict(&sub)?));
    let inflated: Vec<CohomologyClass> = hq.basis.iter().map(|c| data.inflate(c)).collect::<Result<_, _>>()?;
    let relations = coboundary_relations(&inflated);
    let inflation_rank = inflated.len() - relations.len();
    let image_in_kernel = inflated.iter().all(|c| c.restrict(&sub).map(|r| r.is_coboundary()).unwrap_or(false));
    let kernel = restriction_kernel(&hg, &sub)?;
    let inflation_injective = relations.is_empty();
    Ok(ExactnessReport {
        group_order: g.order(),
        normal_order: sub.group.order(),
        fixed_dim: data.fixed_module.dim(),
        h1_quotient: hq.dim,
        h1_group: hg.dim,
        h1_normal: hn.dim,
        inflation_rank,
        restriction_kernel_dim: kernel.len(),
        inflation_injective,
        image_in_kernel,
        exact: inflation_injective && image_in_kernel && inflation_rank == kernel.len(),
    })
}

/// Convenience for matrix groups: `N` given as a subgroup of `G`.
pub fn inf_res_exactness_for(g: &MatGroup, n: &MatGroup, which: StandardModule) -> Result<ExactnessReport, CohomologyError> {
    let emb = n.embedding_into(g).map_err(|_| CohomologyError::NotSubgroup)?;
    if !g.table().is_normal(&emb) {
        return Err(CohomologyError::NotNormal);
    }
    inf_res_exactness_check(&Arc::new(which.build(g)), &emb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{borel, gl2, unipotent};

    #[test]
    fn cyclic_groups_have_no_sha() {
        for which in StandardModule::ALL {
            let m = Arc::new(which.build(&unipotent(5).unwrap()));
            assert_eq!(sha1(&m).dim, 0);
        }
    }

    #[test]
    fn borel_ad_p5() {
        let m = Arc::new(StandardModule::Ad.build(&borel(5).unwrap()));
        assert_eq!(sha1(&m).dim, 0);
    }

    #[test]
    fn serre_p3() {
        for which in StandardModule::ALL {
            let r = serre_restriction_check(3, which).unwrap();
            assert!(r.injective, "{r:?}");
            assert_eq!(r.sylow_kernel_dim, 0);
        }
        assert_eq!(serre_restriction_check(7, StandardModule::V).unwrap_err(), CohomologyError::UnsupportedPrime(7));
    }

    #[test]
    fn exactness_whole_group() {
        let g = borel(3).unwrap();
        let r = inf_res_exactness_for(&g, &g, StandardModule::Sym2).unwrap();
        assert_eq!(r.h1_quotient, 0);
        assert!(r.exact);
    }

    #[test]
    fn exactness_examples() {
        let r = inf_res_exactness_for(&gl2(3).unwrap(), &sl2(3).unwrap(), StandardModule::Ad).unwrap();
        assert!(r.exact, "{r:?}");
        let r = inf_res_exactness_for(&borel(3).unwrap(), &unipotent(3).unwrap(), StandardModule::Sym2).unwrap();
        assert!(r.exact, "{r:?}");
    }

    #[test]
    fn non_normal_rejected() {
        let g = gl2(3).unwrap();
        let err = inf_res_exactness_for(&g, &borel(3).unwrap(), StandardModule::V).unwrap_err();
        assert_eq!(err, CohomologyError::NotNormal);
    }
}
