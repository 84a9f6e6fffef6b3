//! Command implementations behind the `galsym` binary. Every command returns
//! a [`RunReport`]; the binary only parses flags, writes JSON and maps the
//! outcome to an exit code.

pub mod commands;
pub mod report;
pub mod verify;

use thiserror::Error;

pub use commands::{
    approximate, classify, cohomology, prime_scan, serre_check, sha_scan, ApproximateArgs, Scope,
};
pub use report::{Outcome, RunReport, SCHEMA_VERSION};
pub use verify::verify_report;

/// Usage and input errors. Mathematical failures are not errors: they are
/// reported through [`Outcome::passed`].
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Group(#[from] galsym_core::GroupError),
    #[error(transparent)]
    Cohomology(#[from] galsym_core::cohomology::CohomologyError),
    #[error(transparent)]
    Elliptic(#[from] galsym_core::elliptic::EllipticError),
    #[error(transparent)]
    Padic(#[from] galsym_core::padic::PadicError),
}

/// Process exit status for an outcome or error.
pub fn exit_code(result: &Result<Outcome, CliError>) -> u8 {
    match result {
        Ok(o) if o.passed => 0,
        Ok(_) => 1,
        Err(_) => 2,
    }
}
