//! Numerical tolerances shared across the crate.
//!
//! Dimensions stay at or below 64, so conditioning is benign and most
//! checks can sit near machine precision.

/// Absolute Hermiticity tolerance applied when a [`crate::HermitianMatrix`] is built.
pub const HERMITIAN: f64 = 1e-12;

/// Spectral reconstruction, trace and positivity checks on states.
pub const SPECTRAL: f64 = 1e-10;

/// Default relative rank cutoff for pseudo-inverses.
pub const RANK: f64 = 1e-10;

/// An operator is spatially incompatible when its smallest eigenvalue is below `-NEGATIVITY`.
pub const NEGATIVITY: f64 = 1e-10;

/// Trace preservation of Kraus sets.
pub const TRACE_PRESERVING: f64 = 1e-10;

/// Channel identities (class predicates, channel equality) on basis units.
pub const CHANNEL_IDENTITY: f64 = 1e-9;

/// Block positivity: support residual and Schur-complement eigenvalue floor.
pub const BLOCK: f64 = 1e-9;

/// Probabilities below this are treated as impossible branches.
pub const BRANCH: f64 = 1e-14;
