//! Closed forms for a single-photon input `|1>`.
//!
//! With `s = 1 - q^2` and `gamma = (1 - q) beta`:
//!
//! ```text
//! T_q(beta)|1> = sqrt(s/pi) e^{-s|beta|^2/2} D(gamma) (s beta^* |0> + q |1>)
//! |out(beta)>  = D(gamma) (s beta^* |0> + q |1>) / sqrt(q^2 + s^2 |beta|^2)
//! C_q(beta)    = q s beta / (q^2 + s^2 |beta|^2) + (1 - q) beta
//! ```
//!
//! These are independent of the series construction in [`crate::channel`]
//! apart from the displacement itself.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::channel::validate_q;
use crate::displacement::displacement_closed_form;
use crate::error::{Error, Result};
use crate::fock::{check_beta, FockVector};

/// Field expectation of the conditional output, split into its two terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceValue {
    pub value: Complex64,
    /// `q (1 - q^2) beta / (q^2 + (1 - q^2)^2 |beta|^2)`
    pub measurement_induced: Complex64,
    /// `(1 - q) beta`
    pub classical_feedthrough: Complex64,
}

/// Location and height of the maximum of the measurement-induced term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherencePeak {
    pub beta_mag: f64,
    pub peak_value: f64,
}

fn is_degenerate(q: f64, beta: Complex64) -> bool {
    q == 0.0 && beta == Complex64::new(0.0, 0.0)
}

fn degenerate(beta: Complex64) -> Error {
    Error::DegenerateOutcome { beta, density: 0.0 }
}

/// `D((1-q) beta) (s beta^* |0> + q |1>)` without any normalization.
fn displaced_superposition(q: f64, beta: Complex64, cutoff: usize) -> Result<DVector<Complex64>> {
    validate_q(q)?;
    check_beta(beta)?;
    if cutoff < 2 {
        return Err(Error::Domain(format!(
            "single-photon forms need cutoff >= 2, got {cutoff}"
        )));
    }
    let s = 1.0 - q * q;
    let d = displacement_closed_form(beta * (1.0 - q), cutoff)?;
    let d = d.entries();
    Ok(d.column(0) * (beta.conj() * s) + d.column(1) * Complex64::new(q, 0.0))
}

/// Unnormalized output `T_q(beta)|1>` in closed form.
pub fn single_photon_output_unnormalized(
    q: f64,
    beta: Complex64,
    cutoff: usize,
) -> Result<FockVector> {
    let v = displaced_superposition(q, beta, cutoff)?;
    let s = 1.0 - q * q;
    let scale = (s / PI).sqrt() * (-0.5 * s * beta.norm_sqr()).exp();
    Ok(FockVector::from_dvector(v * Complex64::new(scale, 0.0)))
}

/// Normalized conditional output for a single-photon input.
pub fn single_photon_output_normalized(
    q: f64,
    beta: Complex64,
    cutoff: usize,
) -> Result<FockVector> {
    validate_q(q)?;
    if is_degenerate(q, beta) {
        return Err(degenerate(beta));
    }
    let v = displaced_superposition(q, beta, cutoff)?;
    let s = 1.0 - q * q;
    let norm = (q * q + s * s * beta.norm_sqr()).sqrt();
    Ok(FockVector::from_dvector(
        v * Complex64::new(1.0 / norm, 0.0),
    ))
}

/// Field expectation `<out|a|out>` for a single-photon input.
pub fn coherence_analytic(q: f64, beta: Complex64) -> Result<CoherenceValue> {
    validate_q(q)?;
    check_beta(beta)?;
    if is_degenerate(q, beta) {
        return Err(degenerate(beta));
    }
    let s = 1.0 - q * q;
    let measurement_induced = beta * (q * s / (q * q + s * s * beta.norm_sqr()));
    let classical_feedthrough = beta * (1.0 - q);
    Ok(CoherenceValue {
        value: measurement_induced + classical_feedthrough,
        measurement_induced,
        classical_feedthrough,
    })
}

/// `|<1|out(beta)>|^2`, exact at any `beta` since it needs no truncated basis.
pub fn single_photon_fidelity(q: f64, beta: Complex64) -> Result<f64> {
    validate_q(q)?;
    check_beta(beta)?;
    if is_degenerate(q, beta) {
        return Err(degenerate(beta));
    }
    let s = 1.0 - q * q;
    let r2 = beta.norm_sqr();
    let g2 = (1.0 - q) * (1.0 - q) * r2;
    // <1|D(g)|0> = g e^{-|g|^2/2}, <1|D(g)|1> = (1 - |g|^2) e^{-|g|^2/2}
    let overlap = s * (1.0 - q) * r2 + q * (1.0 - g2);
    Ok((-g2).exp() * overlap * overlap / (q * q + s * s * r2))
}

/// `<out|n|out>` for a single-photon input.
pub fn single_photon_mean_photon_number(q: f64, beta: Complex64) -> Result<f64> {
    validate_q(q)?;
    check_beta(beta)?;
    if is_degenerate(q, beta) {
        return Err(degenerate(beta));
    }
    let s = 1.0 - q * q;
    let r2 = beta.norm_sqr();
    let norm_sqr = q * q + s * s * r2;
    Ok((q * q + 2.0 * (1.0 - q) * s * q * r2) / norm_sqr + (1.0 - q) * (1.0 - q) * r2)
}

/// Outcome density for a single-photon input,
/// `s/pi e^{-s|beta|^2} (q^2 + s^2 |beta|^2)`.
pub fn single_photon_density(q: f64, beta: Complex64) -> Result<f64> {
    validate_q(q)?;
    check_beta(beta)?;
    let s = 1.0 - q * q;
    let r2 = beta.norm_sqr();
    Ok(s / PI * (-s * r2).exp() * (q * q + s * s * r2))
}

/// Maximum of `|measurement_induced|` over `|beta|`, at `|beta| = q / (1 - q^2)`.
pub fn coherence_peak(q: f64) -> Result<CoherencePeak> {
    validate_q(q)?;
    if q == 0.0 {
        return Err(Error::InvalidParameter(
            "the measurement-induced term vanishes identically at q = 0".into(),
        ));
    }
    let beta_mag = q / (1.0 - q * q);
    let peak = coherence_analytic(q, Complex64::new(beta_mag, 0.0))?;
    Ok(CoherencePeak {
        beta_mag,
        peak_value: peak.measurement_induced.norm(),
    })
}
