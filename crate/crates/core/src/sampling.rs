//! Seeded rejection sampling of measurement outcomes from `P(beta)`.
//!
//! Proposals come from an isotropic complex Gaussian
//! `g(beta) = a/pi e^{-a |beta|^2}` with `a = (1 - q^2) / 2`. Every outcome
//! density decays like `e^{-(1 - q^2)|beta|^2}` times a polynomial, so the
//! ratio `P / g` is bounded.
//!
//! Each worker draws from its own ChaCha20 stream keyed by `(seed, worker)`,
//! so a batch is a pure function of the seed, the parameters and the worker
//! count.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::analytic::single_photon_density;
use crate::channel::{conditional_output, outcome_density, MeasurementOutcome, TeleportParams};
use crate::error::{Error, Result};
use crate::fock::{field_expectation, FockVector};
use crate::quadrature::neumaier_sum;

/// Inflation applied to a grid-estimated envelope constant.
pub const ENVELOPE_INFLATION: f64 = 1.2;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub seed: u64,
    pub workers: usize,
    pub outcomes: Vec<MeasurementOutcome>,
    /// Accepted over proposed draws, pooled across workers.
    pub acceptance_rate: f64,
    pub envelope_constant: f64,
}

/// Aggregate field statistics of conditional outputs over a batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceSummary {
    pub count: usize,
    pub mean: Complex64,
    /// `E|C - E C|^2`
    pub variance: f64,
    pub mean_photon_number: f64,
}

enum Target<'a> {
    SinglePhoton,
    General(&'a FockVector),
}

struct Envelope {
    rate: f64,
    constant: f64,
}

impl Envelope {
    fn density(&self, beta: Complex64) -> f64 {
        self.rate / PI * (-self.rate * beta.norm_sqr()).exp()
    }

    fn bound(&self, beta: Complex64) -> f64 {
        self.constant * self.density(beta)
    }
}

fn is_single_photon(input: &FockVector) -> bool {
    input.cutoff() > 1 && input.amplitude(1).norm_sqr() >= 1.0 - 1e-14
}

impl Target<'_> {
    fn density(&self, p: &TeleportParams, beta: Complex64) -> Result<f64> {
        match self {
            Target::SinglePhoton => single_photon_density(p.q(), beta),
            Target::General(input) => outcome_density(p, beta, input),
        }
    }
}

/// Maximum of `P_1 / g` in closed form: with `u = |beta|^2` the ratio is
/// `2 e^{-s u / 2} (q^2 + s^2 u)`, stationary at `u = 2/s - q^2/s^2`.
fn single_photon_envelope_constant(q: f64) -> f64 {
    let s = 1.0 - q * q;
    let u = 2.0 / s - q * q / (s * s);
    if u <= 0.0 {
        2.0 * q * q
    } else {
        2.0 * (-0.5 * s * u).exp() * (q * q + s * s * u)
    }
}

fn grid_envelope_constant(p: &TeleportParams, target: &Target, rate: f64) -> Result<f64> {
    let s = 1.0 - p.q() * p.q();
    let radius = 8.0 / s.sqrt();
    let (radial, angular) = (96usize, 32usize);
    let probe = Envelope {
        rate,
        constant: 1.0,
    };
    let ratios: Vec<f64> = (0..=radial)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let r = radius * i as f64 / radial as f64;
            let mut best = 0.0f64;
            for k in 0..angular {
                let beta = Complex64::from_polar(r, 2.0 * PI * k as f64 / angular as f64);
                best = best.max(target.density(p, beta)? / probe.density(beta));
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;
    Ok(ENVELOPE_INFLATION * ratios.into_iter().fold(0.0, f64::max))
}

/// Draws `count` outcomes with a single worker.
pub fn sample_outcomes(
    p: &TeleportParams,
    input: &FockVector,
    count: usize,
    seed: u64,
) -> Result<SampleBatch> {
    sample_outcomes_partitioned(p, input, count, seed, 1)
}

/// Draws `count` outcomes split over `workers` independent streams; the
/// merged batch lists worker 0's outcomes first.
pub fn sample_outcomes_partitioned(
    p: &TeleportParams,
    input: &FockVector,
    count: usize,
    seed: u64,
    workers: usize,
) -> Result<SampleBatch> {
    if count == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    if workers == 0 {
        return Err(Error::Domain("worker count must be at least 1".into()));
    }
    input.require_normalized()?;
    if input.cutoff() != p.cutoff() {
        return Err(Error::Dimension {
            expected: p.cutoff(),
            found: input.cutoff(),
        });
    }
    let target = if is_single_photon(input) {
        Target::SinglePhoton
    } else {
        Target::General(input)
    };
    let rate = 0.5 * (1.0 - p.q() * p.q());
    let constant = match target {
        Target::SinglePhoton => single_photon_envelope_constant(p.q()),
        Target::General(_) => grid_envelope_constant(p, &target, rate)?,
    };
    let envelope = Envelope { rate, constant };
    // Per-component standard deviation of the proposal.
    let sigma = (0.5 / rate).sqrt();

    let shares: Vec<(usize, usize)> = (0..workers)
        .map(|w| (w, count / workers + usize::from(w < count % workers)))
        .collect();
    let parts: Vec<(Vec<MeasurementOutcome>, u64)> = shares
        .par_iter()
        .map(
            |&(worker, share)| -> Result<(Vec<MeasurementOutcome>, u64)> {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                rng.set_stream(worker as u64);
                let mut accepted = Vec::with_capacity(share);
                let mut proposals = 0u64;
                while accepted.len() < share {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    let u: f64 = rng.random();
                    proposals += 1;
                    let beta = Complex64::new(sigma * re, sigma * im);
                    let density = target.density(p, beta)?;
                    let bound = envelope.bound(beta);
                    if density > bound * (1.0 + 1e-12) {
                        return Err(Error::Envelope {
                            beta,
                            density,
                            bound,
                        });
                    }
                    if u * bound < density {
                        accepted.push(MeasurementOutcome { beta, density });
                    }
                }
                Ok((accepted, proposals))
            },
        )
        .collect::<Result<_>>()?;

    let proposals: u64 = parts.iter().map(|(_, n)| n).sum();
    let outcomes: Vec<MeasurementOutcome> = parts.into_iter().flat_map(|(o, _)| o).collect();
    Ok(SampleBatch {
        seed,
        workers,
        acceptance_rate: outcomes.len() as f64 / proposals as f64,
        outcomes,
        envelope_constant: constant,
    })
}

/// Field expectation and photon number of the conditional outputs over a batch.
pub fn coherence_statistics(
    p: &TeleportParams,
    input: &FockVector,
    batch: &SampleBatch,
) -> Result<CoherenceSummary> {
    if batch.outcomes.is_empty() {
        return Err(Error::Domain(
            "coherence statistics need a nonempty batch".into(),
        ));
    }
    let per_outcome: Vec<(Complex64, f64)> = batch
        .outcomes
        .par_iter()
        .map(|o| -> Result<(Complex64, f64)> {
            let out = conditional_output(p, o.beta, input)?;
            Ok((field_expectation(&out)?, out.mean_photon_number()))
        })
        .collect::<Result<_>>()?;
    let n = per_outcome.len() as f64;
    let mean = Complex64::new(
        neumaier_sum(per_outcome.iter().map(|(c, _)| c.re)) / n,
        neumaier_sum(per_outcome.iter().map(|(c, _)| c.im)) / n,
    );
    let variance = neumaier_sum(per_outcome.iter().map(|(c, _)| (c - mean).norm_sqr())) / n;
    let mean_photon_number = neumaier_sum(per_outcome.iter().map(|&(_, m)| m)) / n;
    Ok(CoherenceSummary {
        count: per_outcome.len(),
        mean,
        variance,
        mean_photon_number,
    })
}
