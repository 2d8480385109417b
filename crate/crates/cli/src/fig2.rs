//! Field coherence of the teleported single photon as a function of `|beta|`.

use std::f64::consts::PI;

use cvtele_core::{
    apply_channel, channel::DEGENERATE_DENSITY, coherence_analytic, coherence_peak,
    field_expectation, Complex64, FockVector, TeleportParams,
};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::csv;
use crate::{CliError, EXIT_SUCCESS, EXIT_VERIFICATION};

pub const HEADER: [&str; 16] = [
    "q",
    "beta_re",
    "beta_im",
    "density",
    "coherence_re",
    "coherence_im",
    "coherence_analytic_re",
    "coherence_analytic_im",
    "asymptote_re",
    "asymptote_im",
    "measurement_induced_re",
    "measurement_induced_im",
    "fidelity_to_input",
    "mean_photon_number",
    "tail_mass",
    "flagged",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub q: f64,
    pub beta: Complex64,
    pub density: f64,
    /// `<out|a|out>` of the numerically teleported state.
    pub coherence: Complex64,
    pub coherence_analytic: Complex64,
    /// `(1 - q) beta`
    pub asymptote: Complex64,
    pub measurement_induced: Complex64,
    pub fidelity_to_input: f64,
    pub mean_photon_number: f64,
    pub tail_mass: f64,
    /// Numeric and analytic coherence differ by more than the tolerance.
    pub flagged: bool,
}

impl SweepRecord {
    pub fn deviation(&self) -> f64 {
        (self.coherence - self.coherence_analytic).norm()
    }

    pub fn to_csv_row(&self) -> String {
        let f = csv::float;
        csv::row([
            f(self.q),
            f(self.beta.re),
            f(self.beta.im),
            f(self.density),
            f(self.coherence.re),
            f(self.coherence.im),
            f(self.coherence_analytic.re),
            f(self.coherence_analytic.im),
            f(self.asymptote.re),
            f(self.asymptote.im),
            f(self.measurement_induced.re),
            f(self.measurement_induced.im),
            f(self.fidelity_to_input),
            f(self.mean_photon_number),
            f(self.tail_mass),
            u8::from(self.flagged).to_string(),
        ])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    pub flagged: usize,
}

impl SweepOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.flagged == 0 {
            EXIT_SUCCESS
        } else {
            EXIT_VERIFICATION
        }
    }

    pub fn to_csv(&self) -> String {
        csv::render(&HEADER, self.records.iter().map(SweepRecord::to_csv_row))
    }
}

/// Magnitudes `0, ..., beta_max` in `steps` equal increments, with the peak
/// of the measurement-induced term inserted when it falls inside the range.
/// The origin is dropped at `q = 0`, where the output is undefined.
pub fn magnitudes(config: &RunConfig) -> Vec<f64> {
    let last = (config.steps - 1) as f64;
    let mut mags: Vec<f64> = (0..config.steps)
        .map(|k| config.beta_max * k as f64 / last)
        .collect();
    if let Ok(peak) = coherence_peak(config.q) {
        let spacing = config.beta_max / last;
        let close = mags
            .iter()
            .any(|m| (m - peak.beta_mag).abs() <= 1e-12 * spacing);
        if peak.beta_mag < config.beta_max && !close {
            mags.push(peak.beta_mag);
            mags.sort_by(f64::total_cmp);
        }
    }
    if config.q == 0.0 {
        mags.retain(|&m| m > 0.0);
    }
    mags
}

/// Sweep points in output order: magnitude-major, then angle.
pub fn grid(config: &RunConfig) -> Vec<Complex64> {
    magnitudes(config)
        .into_iter()
        .flat_map(|r| {
            let angles = if r == 0.0 { 1 } else { config.angles };
            (0..angles).map(move |k| Complex64::from_polar(r, 2.0 * PI * k as f64 / angles as f64))
        })
        .collect()
}

fn record(
    p: &TeleportParams,
    input: &FockVector,
    beta: Complex64,
    tolerance: f64,
) -> Result<SweepRecord, CliError> {
    let (unnormalized, density) = apply_channel(p, beta, input)?;
    if density <= DEGENERATE_DENSITY {
        return Err(cvtele_core::Error::DegenerateOutcome { beta, density }.into());
    }
    let out = unnormalized.scaled(Complex64::new(1.0 / density.sqrt(), 0.0));
    let coherence = field_expectation(&out)?;
    let analytic = coherence_analytic(p.q(), beta)?;
    let mut rec = SweepRecord {
        q: p.q(),
        beta,
        density,
        coherence,
        coherence_analytic: analytic.value,
        asymptote: analytic.classical_feedthrough,
        measurement_induced: analytic.measurement_induced,
        fidelity_to_input: out.fidelity(input)?,
        mean_photon_number: out.mean_photon_number(),
        tail_mass: out.tail_mass(),
        flagged: false,
    };
    let deviation = rec.deviation();
    rec.flagged = deviation.is_nan() || deviation > tolerance;
    Ok(rec)
}

/// Evaluates every grid point for a single-photon input.
pub fn sweep(config: &RunConfig) -> Result<SweepOutcome, CliError> {
    let p = config.params()?;
    let input = FockVector::basis_state(1, p.cutoff())?;
    let records: Vec<SweepRecord> = grid(config)
        .into_par_iter()
        .map(|beta| record(&p, &input, beta, config.tolerance))
        .collect::<Result<_, _>>()?;
    let flagged = records.iter().filter(|r| r.flagged).count();
    Ok(SweepOutcome { records, flagged })
}

/// Runs the sweep and writes it as CSV (default `fig2.csv`).
pub fn cmd_fig2(config: &RunConfig) -> Result<SweepOutcome, CliError> {
    let outcome = sweep(config)?;
    csv::write(&config.output_or("fig2.csv"), &outcome.to_csv())?;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(steps: usize, beta_max: f64) -> RunConfig {
        RunConfig {
            steps,
            beta_max,
            ..RunConfig::default()
        }
    }

    #[test]
    fn peak_is_inserted_into_grid() {
        let mags = magnitudes(&config(2, 10.0));
        assert_eq!(mags.len(), 3);
        assert_eq!(mags[0], 0.0);
        assert!((mags[1] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(mags[2], 10.0);
    }

    #[test]
    fn three_point_sweep_values() {
        let out = sweep(&config(2, 10.0)).unwrap();
        let want = [0.0, 0.8333, 5.0664];
        for (rec, w) in out.records.iter().zip(want) {
            assert!((rec.coherence_analytic.re - w).abs() < 1e-4, "{rec:?}");
            assert!(rec.deviation() <= 1e-8);
        }
        assert_eq!(out.records[0].fidelity_to_input, 1.0);
        assert_eq!(out.records[2].asymptote, Complex64::new(5.0, 0.0));
        assert_eq!(out.flagged, 0);
    }

    #[test]
    fn origin_dropped_without_entanglement() {
        let c = RunConfig {
            q: 0.0,
            steps: 3,
            beta_max: 1.0,
            ..RunConfig::default()
        };
        assert_eq!(magnitudes(&c), vec![0.5, 1.0]);
    }

    #[test]
    fn polar_grid_layout() {
        let c = RunConfig {
            steps: 3,
            beta_max: 1.0,
            angles: 4,
            ..RunConfig::default()
        };
        // origin once, then 4 angles for each of 2/3, 0.5 and 1.0
        assert_eq!(grid(&c).len(), 1 + 3 * 4);
    }

    #[test]
    fn starved_cutoff_is_flagged() {
        let c = RunConfig {
            cutoff: 4,
            steps: 5,
            beta_max: 4.0,
            ..RunConfig::default()
        };
        let out = sweep(&c).unwrap();
        assert!(out.flagged > 0);
        assert_eq!(out.exit_code(), EXIT_VERIFICATION);
    }
}
