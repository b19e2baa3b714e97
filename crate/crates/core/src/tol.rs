//! Numerical tolerances used throughout.

/// structural identities (commutators, orthogonality, invariance)
pub const STRUCT: f64 = 1e-9;
/// Casimir eigenvalue clustering
pub const CLUSTER: f64 = 1e-6;
/// clusters closer than this (relative) are reported as ambiguous
pub const CLUSTER_GAP: f64 = 1e-3;
/// maximum real dimension of an ambient tensor space
pub const SIZE_CAP: usize = 2000;
/// effect range slack when validating measurements
pub const EFFECT: f64 = 1e-7;
/// normalization identities of a measurement
pub const NORMALIZATION: f64 = 1e-10;
/// LP feasibility threshold on the slack variable
pub const LP_FEASIBLE: f64 = 1e-8;
/// gradient norm at which orbit refinement stops
pub const GRADIENT: f64 = 1e-10;
/// states closer than this are treated as one extremizer
pub const EXTREMIZER_DISTANCE: f64 = 1e-5;
/// distance below which two state vectors are antipodal or equal
pub const ANTIPODAL: f64 = 1e-3;
/// overlaps above this are counted as non-orthogonal
pub const OVERLAP: f64 = 1e-6;
