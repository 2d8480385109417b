//! Teleportation as a conditional channel.
//!
//! For entanglement parameter `q` and measured field value `beta`, the
//! transfer operator is
//!
//! ```text
//! T_q(beta) = sqrt((1 - q^2) / pi) * sum_n q^n D(beta)|n><n|D(-beta)
//! ```
//!
//! and acting on an input state it gives `sqrt(P(beta)) |out(beta)>`, where
//! `P` is the outcome density per unit area of the complex plane.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::displacement::displacement_closed_form;
use crate::error::{Error, Result};
use crate::fock::{check_beta, check_cutoff, ComplexOperator, FockVector, DEFAULT_CUTOFF};
use crate::quadrature::{neumaier_sum, GridSpec, QuadratureGrid};

/// Densities at or below this value are treated as zero-probability outcomes.
pub const DEGENERATE_DENSITY: f64 = 1e-300;

/// Entanglement parameter and truncation policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportParams {
    q: f64,
    cutoff: usize,
    sum_terms: usize,
}

pub(crate) fn validate_q(q: f64) -> Result<()> {
    if !q.is_finite() || !(0.0..1.0).contains(&q) {
        let hint = if q == 1.0 {
            " (q = 1 is the singular maximal-entanglement limit)"
        } else {
            ""
        };
        return Err(Error::InvalidParameter(format!(
            "q must satisfy 0 <= q < 1, got {q}{hint}"
        )));
    }
    Ok(())
}

impl TeleportParams {
    /// Parameters with the geometric series truncated at `cutoff` terms.
    pub fn new(q: f64, cutoff: usize) -> Result<Self> {
        validate_q(q)?;
        check_cutoff(cutoff)?;
        Ok(Self {
            q,
            cutoff,
            sum_terms: cutoff,
        })
    }

    pub fn with_default_cutoff(q: f64) -> Result<Self> {
        Self::new(q, DEFAULT_CUTOFF)
    }

    pub fn with_sum_terms(mut self, sum_terms: usize) -> Result<Self> {
        if sum_terms == 0 || sum_terms > self.cutoff {
            return Err(Error::InvalidParameter(format!(
                "sum_terms must lie in 1..={}, got {sum_terms}",
                self.cutoff
            )));
        }
        self.sum_terms = sum_terms;
        Ok(self)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn sum_terms(&self) -> usize {
        self.sum_terms
    }

    /// Bound `q^sum_terms / (1 - q)` on the dropped tail of the series weights.
    pub fn residual_bound(&self) -> f64 {
        self.q.powi(self.sum_terms as i32) / (1.0 - self.q)
    }

    fn prefactor(&self) -> f64 {
        ((1.0 - self.q * self.q) / PI).sqrt()
    }

    /// `prefactor * q^n` for `n < sum_terms`, zero beyond.
    fn weights(&self) -> Vec<f64> {
        let c = self.prefactor();
        let mut w = vec![0.0; self.cutoff];
        let mut qn = 1.0;
        for slot in w.iter_mut().take(self.sum_terms) {
            *slot = c * qn;
            qn *= self.q;
        }
        w
    }
}

/// A field measurement result and its probability density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOutcome {
    pub beta: Complex64,
    pub density: f64,
}

/// `D diag(w) D^dag`, restricted to the first `columns` columns.
fn sandwich(d: &DMatrix<Complex64>, weights: &[f64], columns: usize) -> DMatrix<Complex64> {
    let n = d.nrows();
    let mut scaled = d.clone();
    for (k, &w) in weights.iter().enumerate() {
        scaled.column_mut(k).scale_mut(w);
    }
    let right = d.rows(0, columns).adjoint();
    debug_assert_eq!(right.nrows(), n);
    scaled * right
}

/// Transfer operator `T_q(beta)` on the truncated basis.
pub fn transfer_operator(p: &TeleportParams, beta: Complex64) -> Result<ComplexOperator> {
    check_beta(beta)?;
    let d = displacement_closed_form(beta, p.cutoff)?;
    Ok(ComplexOperator::from_matrix_unchecked(sandwich(
        d.entries(),
        &p.weights(),
        p.cutoff,
    )))
}

fn transfer_apply(
    p: &TeleportParams,
    beta: Complex64,
    input: &FockVector,
) -> Result<DVector<Complex64>> {
    if input.cutoff() != p.cutoff {
        return Err(Error::Dimension {
            expected: p.cutoff,
            found: input.cutoff(),
        });
    }
    check_beta(beta)?;
    let d = displacement_closed_form(beta, p.cutoff)?;
    let d = d.entries();
    let mut mid = d.ad_mul(input.amplitudes());
    for (z, w) in mid.iter_mut().zip(p.weights()) {
        *z *= w;
    }
    Ok(d * mid)
}

/// `T_q(beta)|input>` together with its squared norm, the outcome density.
pub fn apply_channel(
    p: &TeleportParams,
    beta: Complex64,
    input: &FockVector,
) -> Result<(FockVector, f64)> {
    input.require_normalized()?;
    let out = FockVector::from_dvector(transfer_apply(p, beta, input)?);
    let density = out.norm_sqr();
    Ok((out, density))
}

/// Outcome density `P(beta)` alone.
pub fn outcome_density(p: &TeleportParams, beta: Complex64, input: &FockVector) -> Result<f64> {
    apply_channel(p, beta, input).map(|(_, density)| density)
}

/// Normalized conditional output for outcome `beta`.
pub fn conditional_output(
    p: &TeleportParams,
    beta: Complex64,
    input: &FockVector,
) -> Result<FockVector> {
    let (out, density) = apply_channel(p, beta, input)?;
    if density <= DEGENERATE_DENSITY {
        return Err(Error::DegenerateOutcome { beta, density });
    }
    Ok(out.scaled(Complex64::new(1.0 / density.sqrt(), 0.0)))
}

/// `max |(int_{|beta| <= radius} T^dag T d^2beta - I)_{ij}|` over the
/// leading `cutoff / 2` block.
pub fn completeness_defect(p: &TeleportParams, radius: f64, spec: GridSpec) -> Result<f64> {
    completeness_defect_block(p, radius, spec, (p.cutoff / 2).max(1))
}

/// [`completeness_defect`] over the leading `block x block` sub-matrix.
///
/// The angular sum is carried out using `T(r e^{i theta})_{kj} =
/// e^{i (k - j) theta} T(r)_{kj}`, so the displacement is built once per
/// radial node.
pub fn completeness_defect_block(
    p: &TeleportParams,
    radius: f64,
    spec: GridSpec,
    block: usize,
) -> Result<f64> {
    let grid = QuadratureGrid::polar(radius, spec)?;
    let block = block.clamp(1, p.cutoff);
    let weights = p.weights();

    let radial: Vec<DMatrix<Complex64>> = grid
        .radial_nodes()
        .par_iter()
        .map(|&(r, w)| -> Result<DMatrix<Complex64>> {
            let d = displacement_closed_form(Complex64::new(r, 0.0), p.cutoff)?;
            let t = sandwich(d.entries(), &weights, block);
            Ok(t.ad_mul(&t) * Complex64::new(w, 0.0))
        })
        .collect::<Result<_>>()?;

    let dtheta = grid.angular_spacing();
    let angular = DMatrix::from_fn(block, block, |i, j| {
        let offset = i as f64 - j as f64;
        let terms: Vec<Complex64> = grid
            .angles()
            .map(|theta| Complex64::from_polar(dtheta, offset * theta))
            .collect();
        Complex64::new(
            neumaier_sum(terms.iter().map(|z| z.re)),
            neumaier_sum(terms.iter().map(|z| z.im)),
        )
    });

    let mut worst = 0.0f64;
    for i in 0..block {
        for j in 0..block {
            let re = neumaier_sum(radial.iter().map(|m| m[(i, j)].re));
            let im = neumaier_sum(radial.iter().map(|m| m[(i, j)].im));
            let integral = Complex64::new(re, im) * angular[(i, j)];
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((integral - target).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::displacement::displacement_closed_form;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parameter_validation() {
        assert!(TeleportParams::new(1.0, 64).is_err());
        assert!(TeleportParams::new(-0.1, 64).is_err());
        assert!(TeleportParams::new(f64::NAN, 64).is_err());
        assert!(TeleportParams::new(0.5, 0).is_err());
        let p = TeleportParams::new(0.5, 16).unwrap();
        assert_eq!(p.sum_terms(), 16);
        assert!(p.with_sum_terms(17).is_err());
        assert!(p.with_sum_terms(0).is_err());
        let p = TeleportParams::new(0.9, 64).unwrap();
        assert!((p.residual_bound() - 0.9f64.powi(64) / 0.1).abs() < 1e-15);
    }

    #[test]
    fn unentangled_operator_is_rank_one() {
        let p = TeleportParams::new(0.0, 64).unwrap();
        for beta in [c(0.0, 0.0), c(1.0, 0.5), c(-2.0, 0.0)] {
            let s = transfer_operator(&p, beta).unwrap().singular_values();
            assert!(s[0] > 0.5);
            assert!(s[1] <= 1e-10, "beta={beta}: {:e}", s[1]);
        }
    }

    #[test]
    fn diagonal_at_zero_beta() {
        let p = TeleportParams::new(0.5, 16).unwrap();
        let t = transfer_operator(&p, c(0.0, 0.0)).unwrap();
        let c0 = (0.75 / PI).sqrt();
        for m in 0..16 {
            for n in 0..16 {
                let want = if m == n {
                    c0 * 0.5f64.powi(n as i32)
                } else {
                    0.0
                };
                assert!((t.element(m, n) - c(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn displacement_covariance() {
        let p = TeleportParams::new(0.5, 64).unwrap();
        let beta = c(1.0, 0.0);
        let t = transfer_operator(&p, beta).unwrap();
        let t0 = transfer_operator(&p, c(0.0, 0.0)).unwrap();
        let d = displacement_closed_form(beta, 64).unwrap();
        let d_inv = displacement_closed_form(-beta, 64).unwrap();
        let rebuilt = d.compose(&t0).unwrap().compose(&d_inv).unwrap();
        assert!(t.max_block_deviation(&rebuilt, 64).unwrap() <= 1e-9);
    }

    #[test]
    fn channel_densities() {
        let vac = FockVector::basis_state(0, 64).unwrap();
        let one = FockVector::basis_state(1, 64).unwrap();
        let p0 = TeleportParams::new(0.0, 64).unwrap();
        let (_, dens) = apply_channel(&p0, c(0.0, 0.0), &vac).unwrap();
        assert!((dens - 1.0 / PI).abs() < 1e-15);
        assert!((dens - std::f64::consts::FRAC_1_PI).abs() < 1e-15);
        let beta = c(0.8, -0.6);
        let (_, dens) = apply_channel(&p0, beta, &vac).unwrap();
        assert!((dens - (-beta.norm_sqr()).exp() / PI).abs() < 1e-14);

        let p = TeleportParams::new(0.5, 64).unwrap();
        let (out, dens) = apply_channel(&p, c(0.0, 0.0), &one).unwrap();
        assert!((dens - 0.75 * 0.25 / PI).abs() < 1e-15);
        assert!((dens - 0.0596831).abs() < 1e-7);
        for n in 0..64 {
            if n != 1 {
                assert_eq!(out.amplitude(n), c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn conditional_output_edge_cases() {
        let one = FockVector::basis_state(1, 64).unwrap();
        for q in [0.1, 0.5, 0.9] {
            let p = TeleportParams::new(q, 64).unwrap();
            let out = conditional_output(&p, c(0.0, 0.0), &one).unwrap();
            assert!(out.distance(&one).unwrap() < 1e-15);
        }
        let p0 = TeleportParams::new(0.0, 64).unwrap();
        let err = conditional_output(&p0, c(0.0, 0.0), &one).unwrap_err();
        assert!(matches!(err, Error::DegenerateOutcome { .. }));
        let out = conditional_output(&p0, c(1.0, 0.0), &one).unwrap();
        let coh = FockVector::coherent(c(1.0, 0.0), 64).unwrap();
        assert!(out.fidelity(&coh).unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn channel_rejects_bad_input() {
        let p = TeleportParams::new(0.5, 8).unwrap();
        let unnormalized = FockVector::zeros(8).unwrap();
        assert!(matches!(
            apply_channel(&p, c(0.1, 0.0), &unnormalized),
            Err(Error::NotNormalized { .. })
        ));
        let wrong = FockVector::basis_state(0, 9).unwrap();
        assert!(matches!(
            apply_channel(&p, c(0.1, 0.0), &wrong),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn completeness_trivial_radius() {
        let p = TeleportParams::new(0.5, 16).unwrap();
        let defect = completeness_defect_block(&p, 0.0, GridSpec::new(16, 16), 8).unwrap();
        assert_eq!(defect, 1.0);
        assert!(completeness_defect(&p, -1.0, GridSpec::new(16, 16)).is_err());
    }

    #[test]
    fn completeness_unentangled() {
        let p = TeleportParams::new(0.0, 64).unwrap();
        let defect = completeness_defect_block(&p, 8.0, GridSpec::new(64, 64), 8).unwrap();
        assert!(defect <= 1e-6, "{defect:e}");
    }
}
