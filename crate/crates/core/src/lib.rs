//! Finite verification machinery for local–global questions about the
//! `p`-torsion of elliptic curves.
//!
//! * [`linalg`]: exact linear algebra over `F_p`.
//! * [`group`], [`matgroup`]: Cayley tables and explicit subgroups of `GL_2(F_p)`.
//! * [`cohomology`]: `H^0`, `H^1`, `H^2` of finite groups with `F_p`-module
//!   coefficients, restriction and inflation, cup products, and the
//!   locally-trivial kernel `Ш^1` relative to the cyclic subgroups.
//! * [`elliptic`]: Weierstrass curves over `Q`, point counts, division
//!   polynomials, and the per-prime elimination scan.
//! * [`padic`]: fixed-precision `Q_p` arithmetic, Hensel lifting, points of
//!   `E(Q_p)`, division by `p`, and rational approximation certificates.

pub mod cohomology;
pub mod elliptic;
pub mod group;
pub mod linalg;
pub mod matgroup;
pub mod padic;

use thiserror::Error;

pub use linalg::{FpMatrix, LinalgError};
pub use matgroup::{Dichotomy, GroupElement, MatGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("matrix {0} is not invertible")]
    NotInvertible(String),
    #[error("cannot parse matrix {0:?}; expected \"a,b,c,d\"")]
    Parse(String),
    #[error("elements are defined over different primes")]
    ModulusMismatch,
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("generators do not generate the table")]
    NotGenerating,
    #[error("not a subgroup")]
    NotSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group of order {order} is prime to p = {p}")]
    HypothesisNotMet { order: usize, p: u32 },
    #[error("dichotomy violated (Borel-conjugate: {borel}, contains SL2: {sl2})")]
    DichotomyViolated { borel: bool, sl2: bool },
    #[error("unsupported: {0}")]
    Unsupported(String),
}
