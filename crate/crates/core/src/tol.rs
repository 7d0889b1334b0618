//! Numerical tolerances shared across the crate.
//!
//! All matrices handled here are small (at most 729 rows) and well
//! conditioned, so a single set of absolute tolerances is adequate. The
//! polytope geometry works in exact rational arithmetic and needs none of
//! these; they only govern the floating-point paths.

/// Maximum allowed elementwise deviation |A - A'| for an operator that an
/// operation requires to be hermitian.
pub const HERMITICITY_TOL: f64 = 1e-9;

/// An operator counts as positive semidefinite when its minimum eigenvalue
/// is at least -PSD_TOL.
pub const PSD_TOL: f64 = 1e-9;

/// Pure-state amplitude vectors must be normalized to within this tolerance
/// of squared norm one.
pub const NORM_TOL: f64 = 1e-12;

/// Unit-trace check for density matrices supplied by callers.
pub const TRACE_TOL: f64 = 1e-9;

/// Filter acceptance probabilities below this value make the conditional
/// output state meaningless and are reported as errors.
pub const DEGENERATE_FILTER_TOL: f64 = 1e-14;

/// A strictly negative expectation value certifies entanglement or
/// distillability only when it clears this margin.
pub const CERTIFICATE_TOL: f64 = 1e-9;

/// Relative improvement threshold at which alternating minimizers
/// (rank-two search, witness refinement) stop iterating.
pub const ALTERNATION_REL_TOL: f64 = 1e-12;

/// Sweep cap for alternating minimizers.
pub const ALTERNATION_MAX_SWEEPS: usize = 500;

/// Default number of seeded restarts for the rank-two minimizer.
pub const RANK2_DEFAULT_RESTARTS: usize = 64;
