//! Numerical continuous-variable teleportation of photon-number states.
//!
//! States live in a truncated photon-number basis ([`fock`]). The
//! teleportation protocol is represented by a single transfer operator that
//! yields both the outcome density of the field measurement and the
//! conditional output state ([`channel`]). Closed-form results for a
//! single-photon input ([`analytic`]) serve as oracles for the numerics, and
//! [`quadrature`] and [`sampling`] integrate over and draw from the outcome
//! distribution.

pub mod analytic;
pub mod channel;
pub mod displacement;
pub mod error;
pub mod fock;
pub mod laguerre;
pub mod quadrature;
pub mod sampling;

pub use num_complex::Complex64;

pub use analytic::{
    coherence_analytic, coherence_peak, single_photon_density, single_photon_fidelity,
    single_photon_mean_photon_number, single_photon_output_normalized,
    single_photon_output_unnormalized, CoherencePeak, CoherenceValue,
};
pub use channel::{
    apply_channel, completeness_defect, completeness_defect_block, conditional_output,
    outcome_density, transfer_operator, MeasurementOutcome, TeleportParams,
};
pub use displacement::{displacement_closed_form, displacement_exponential};
pub use error::{Error, Result};
pub use fock::{
    annihilation_operator, apply, field_expectation, inner_product, recommended_cutoff,
    ComplexOperator, FockVector, DEFAULT_CUTOFF, MAX_CUTOFF,
};
pub use quadrature::{
    integrate_density, integrate_density_with_error, DensityIntegral, GridSpec, QuadratureGrid,
};
pub use sampling::{
    coherence_statistics, sample_outcomes, sample_outcomes_partitioned, CoherenceSummary,
    SampleBatch,
};
