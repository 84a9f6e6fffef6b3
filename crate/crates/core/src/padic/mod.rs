//! `p`-adic numbers at finite precision, points on elliptic curves over
//! `Q_p`, and rational approximation of points modulo `pE(Q_p)`.

mod approx;
mod hensel;
mod number;
mod point;

use thiserror::Error;

pub use approx::{
    approximate_point, approximate_rational_point, canonical_abscissa, is_rational_square, parse_rational,
    random_point, rational_string, star_condition_report, verify_certificate, y_discriminant_rational,
    ApproximationCertificate, DepthPolicy, StarConditionReport,
};
pub use hensel::{hensel_root, zp_roots, RootSearch};
pub use number::PadicNumber;
pub use point::{CurvePointPadic, Division, PadicCurve, DIVISION_LEVEL};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("no root")]
    NoRoot,
    #[error("root is not simple modulo p")]
    EtaleFailure,
    #[error("starting value is not a root modulo p")]
    NotARoot,
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("value is not integral")]
    NotIntegral,
    #[error("point is 2-torsion modulo p")]
    TwoTorsion,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("every point modulo p is 2-torsion")]
    NoAdmissiblePoint,
    #[error("point at infinity where an affine point is required")]
    NotAffine,
    #[error("unsupported prime {0}")]
    InvalidPrime(u32),
    #[error("reduction at {p} is {reduction}, not good ordinary")]
    NotOrdinary { p: u32, reduction: String },
    #[error("curve: {0}")]
    Curve(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no certified approximation up to depth {depth_max}")]
    PolicyExhausted { depth_max: u32 },
}
