//! Geometric mod-p chain machinery: exact chains with Z_p coefficients,
//! a flat-distance solver for 0-chains, the real-DFT cyclic permutation
//! toolkit, barycentric Bockstein and cyclic product maps, planar Steenrod
//! square families, gluings of parametrized cycle families, and an exact
//! cellular homology oracle that cross-checks the geometric constructions.
//!
//! The crate is organized around the data model in [`chain`]: points-with-
//! coefficients 0-chains and embedded simplicial k-chains over Z_p, stored
//! either in `f64` or exact rational coordinates (see [`scalar::Scalar`]).
//! Everything downstream is a pure function of immutable chain values.
//!
//! Data-parallel inner loops (Monte Carlo mass estimation, batch solves)
//! run on rayon when the `parallel` feature is enabled (default) and fall
//! back to sequential iteration otherwise; results are identical either way
//! because every stratum draws from its own seeded generator.

pub mod ambient;
pub mod bockstein;
pub mod cellular;
pub mod chain;
pub mod coeff;
pub mod exec;
pub mod flatnorm;
pub mod fourier;
pub mod gluing;
pub mod io;
pub mod rng;
pub mod scalar;
pub mod steenrod;
pub mod subspace;
pub mod tol;
pub mod verify;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("degenerate simplex: {0}")]
    DegenerateSimplex(String),
    #[error("point too close to the diagonal: |F_perp x| = {norm:.3e} < {floor:.3e}")]
    DiagonalProximity { norm: f64, floor: f64 },
    #[error("unit cap exceeded: {units} units > cap {cap}{hint}")]
    CapExceeded {
        units: usize,
        cap: usize,
        hint: String,
    },
    #[error("compute budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("non-transversal chain: {0}")]
    NonTransversal(String),
    #[error("degenerate cone: {0}")]
    DegenerateCone(String),
    #[error("collar radius violated: ball radius {r} >= r0 {r0}")]
    CollarViolation { r: f64, r0: f64 },
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
