//! Equatorial-stabilizer shadow tomography.
//!
//! The crate is organized in five layers:
//!
//! - [`eqcore`] — exact mathematics of equatorial stabilizer states: labels,
//!   quadratic phases, overlaps, moments and informational-completeness checks.
//! - [`qsim`] — state-simulation backends (dense statevector, sparse
//!   few-component states, stabilizer tableaus, an exact density-matrix
//!   oracle) plus Pauli noise.
//! - [`synth`] — measurement-circuit construction: CZ layering by edge
//!   coloring and the depth-bounded nearest-neighbor realization.
//! - [`shadow`] — the tomography protocol: outcome sampling, estimators,
//!   median-of-means aggregation, variance bounds and the randomized-Clifford
//!   baseline.
//! - [`bench`] — config-driven experiment harness behind the `eqshadow` CLI.

pub mod bench;
pub mod eqcore;
pub mod qsim;
pub mod rng;
pub mod shadow;
pub mod synth;

/// Default cap on the dense-statevector backend, overridable through the
/// `EQSHADOW_DENSE_CAP` environment variable.
pub const DENSE_CAP_DEFAULT: usize = 12;

/// Cap on the exact density-matrix oracle.
pub const DENSITY_ORACLE_CAP: usize = 6;

/// Effective dense-backend qubit cap.
pub fn dense_cap() -> usize {
    std::env::var("EQSHADOW_DENSE_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DENSE_CAP_DEFAULT)
}
