//! Shared fixtures for the benchmarks.

use cvtele_core::{Complex64, FockVector, TeleportParams};

/// Parameters and a single-photon input at the given cutoff.
pub fn single_photon_setup(q: f64, cutoff: usize) -> (TeleportParams, FockVector) {
    let p = TeleportParams::new(q, cutoff).expect("valid parameters");
    let one = FockVector::basis_state(1, cutoff).expect("cutoff above 1");
    (p, one)
}

/// A generic off-axis outcome.
pub fn probe_beta(mag: f64) -> Complex64 {
    Complex64::from_polar(mag, 0.7)
}
