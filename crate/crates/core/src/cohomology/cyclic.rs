//! Periodic cohomology of cyclic groups from the norm and `σ - 1` maps.

use crate::linalg::FpMatrix;

use super::module::GModule;
use super::CohomologyError;

struct NormData {
    d: usize,
    sigma_minus_one: FpMatrix,
    norm: FpMatrix,
}

fn norm_data(m: &GModule) -> Result<NormData, CohomologyError> {
    let g = m.group();
    let n = g.order();
    let sigma = (0..n).find(|&x| g.element_order(x) == n).ok_or(CohomologyError::NotCyclic)?;
    let d = m.dim();
    let p = m.p();
    let mut norm = FpMatrix::zeros(p, d, d);
    for x in 0..n {
        norm = norm.add(m.action(x));
    }
    let sigma_minus_one = m.action(sigma).sub(&FpMatrix::identity(p, d));
    Ok(NormData { d, sigma_minus_one, norm })
}

/// `dim ker N - dim im(σ - 1)`.
pub fn cyclic_h1(m: &GModule) -> Result<usize, CohomologyError> {
    let nd = norm_data(m)?;
    Ok(nd.d - nd.norm.rank() - nd.sigma_minus_one.rank())
}

/// `dim M^C - dim N·M`.
pub fn cyclic_h2(m: &GModule) -> Result<usize, CohomologyError> {
    let nd = norm_data(m)?;
    Ok(nd.d - nd.sigma_minus_one.rank() - nd.norm.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::module::StandardModule;
    use crate::matgroup::{split_torus, unipotent, GroupElement, MatGroup};

    #[test]
    fn trivial_coefficients_order_p() {
        for p in [3, 5, 7] {
            let m = StandardModule::Trivial.build(&unipotent(p).unwrap());
            assert_eq!(cyclic_h1(&m).unwrap(), 1);
            assert_eq!(cyclic_h2(&m).unwrap(), 1);
        }
    }

    #[test]
    fn order_two_vanishes() {
        let g = MatGroup::close(5, &[GroupElement::new(5, -1, 0, 0, -1).unwrap()]).unwrap();
        for which in StandardModule::ALL {
            let m = which.build(&g);
            assert_eq!(cyclic_h1(&m).unwrap(), 0);
            assert_eq!(cyclic_h2(&m).unwrap(), 0);
        }
    }

    #[test]
    fn unipotent_on_standard() {
        // σ - 1 has rank 1 and N vanishes mod 3
        let m = StandardModule::V.build(&unipotent(3).unwrap());
        assert_eq!(cyclic_h1(&m).unwrap(), 1);
        assert_eq!(cyclic_h2(&m).unwrap(), 1);
    }

    #[test]
    fn non_cyclic_rejected() {
        let m = StandardModule::Trivial.build(&split_torus(3).unwrap());
        assert_eq!(cyclic_h1(&m).unwrap_err(), CohomologyError::NotCyclic);
    }
}
