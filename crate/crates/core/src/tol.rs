//! Hard numeric floors shared across the crate.

/// Two points closer than this merge into one atom.
pub const TAU_MERGE: f64 = 1e-9;
/// Ambient membership slack (sphere radius, disk containment).
pub const TAU_AMB: f64 = 1e-9;
/// Simplices with k-volume below this are degenerate.
pub const TAU_VOL: f64 = 1e-12;
/// Relative tolerance for mass identities (products, gluings).
pub const TAU_REL: f64 = 1e-6;
/// Admissible pairwise overlap volume for non-overlapping chains.
pub const TAU_OVERLAP: f64 = 1e-6;
/// Hard floor for diagonal-excision evaluation; the Jacobian grows as
/// the reciprocal of the diagonal distance, so callers must excise.
pub const EPS_MIN: f64 = 1e-8;
