//! Cohomology of finite groups with coefficients in finite-dimensional
//! `F_p`-representations.
//!
//! Cochains are functions on the element table of the group. `H^1` and
//! `H^2` are solved for on generator coordinates (values on generators,
//! propagated along the Cayley graph), which keeps the linear systems
//! proportional to `|S| · |G|` rather than `|G|^2`; the full unreduced
//! systems are kept as independent checks for small groups.
//!
//! `Ш^1` is taken relative to the family of all cyclic subgroups.

mod checks;
mod cocycle;
mod cyclic;
mod h2;
mod module;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::GroupError;

pub use checks::{
    inf_res_exactness_check, inf_res_exactness_for, serre_restriction_check, sha1, sha1_of, ExactnessReport,
    SerreReport, Sha1,
};
pub use cocycle::{
    coboundary_relations, h1, h1_dim_exhaustive, inflation, restriction_kernel, CohomologyClass, InflationData, H1,
};
pub use cyclic::{cyclic_h1, cyclic_h2};
pub use h2::{
    add_degree2_coboundary, anticommutator, cup, cup_into, h2_dim_exhaustive, h2_small, swap_matrix, H2,
    H2_MAX_ORDER,
};
pub use module::{
    ad, det_twist, lambda2, matrix_subgroup, standard_module, sym2, tensor, twist, GModule, StandardModule,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("values do not satisfy the cocycle identity")]
    NotCocycle,
    #[error("cochain has the wrong shape for its module")]
    Shape,
    #[error("operands live over different groups or modules")]
    GroupMismatch,
    #[error("coefficient map is not equivariant")]
    NotEquivariant,
    #[error("not a subgroup")]
    NotSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("map is not a surjective homomorphism")]
    NotSurjection,
    #[error("group of order {order} exceeds the limit {max}")]
    GroupTooLarge { order: usize, max: usize },
    #[error("group is not cyclic")]
    NotCyclic,
    #[error("operation needs degree-1 classes")]
    Degree,
    #[error("p = {0} is not supported (expected 3 or 5)")]
    UnsupportedPrime(u32),
}
