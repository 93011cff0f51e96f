//! Numeric tolerances used throughout the crate.
//!
//! Two tiers are enough here because every gate is a basis permutation:
//! amplitudes are moved, never recombined, so there is no error growth to
//! absorb beyond ordinary double-precision products of at most a dozen
//! factors.

/// Tolerance for state and operator invariants (normalization, hermiticity,
/// trace, purity).
pub const INVARIANT: f64 = 1e-10;

/// Tolerance for comparisons between the simulation path and an independent
/// closed-form oracle on desk-scale instances.
pub const ORACLE: f64 = 1e-12;
