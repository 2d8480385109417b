//! Verification suites run by `cvtele check`.
//!
//! Every suite reduces to one measured number compared against a fixed
//! tolerance. A suite that errors out counts as a failure with a NaN
//! measurement; the report is written either way.

use std::fmt::Write as _;

use cvtele_core::{
    apply, apply_channel, coherence_analytic, completeness_defect_block, conditional_output,
    displacement_closed_form, displacement_exponential, field_expectation, integrate_density,
    single_photon_density, single_photon_output_unnormalized, transfer_operator, Complex64,
    FockVector, GridSpec, QuadratureGrid, TeleportParams,
};

use crate::config::RunConfig;
use crate::csv;
use crate::{CliError, EXIT_SUCCESS, EXIT_VERIFICATION};

/// Displacement suites are only meaningful where the truncated exponential
/// resolves the operator.
const DISPLACEMENT_BETA_LIMIT: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub results: Vec<CheckResult>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(CheckResult::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            EXIT_SUCCESS
        } else {
            EXIT_VERIFICATION
        }
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.name == name)
    }

    /// `name status measured tolerance` per suite, then a summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            let _ = write!(
                out,
                "{} {} {:.6e} {:.1e}",
                r.name, status, r.measured, r.tolerance
            );
            if let Some(detail) = &r.detail {
                let _ = write!(out, " # {detail}");
            }
            out.push('\n');
        }
        let passed = self.results.iter().filter(|r| r.passed()).count();
        let status = if self.all_passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "summary {status} {passed}/{}", self.results.len());
        out
    }
}

/// `(j/4) * scale * e^{i j pi / 5}` for `j = 0..=4`.
fn probe_betas(scale: f64) -> Vec<Complex64> {
    (0..=4)
        .map(|j| {
            Complex64::from_polar(
                0.25 * j as f64 * scale,
                j as f64 * std::f64::consts::PI / 5.0,
            )
        })
        .collect()
}

type Suite = fn(&RunConfig, &TeleportParams) -> Result<(f64, Option<String>), CliError>;

fn max_over<I, F>(items: I, mut f: F) -> Result<f64, CliError>
where
    I: IntoIterator<Item = Complex64>,
    F: FnMut(Complex64) -> Result<f64, CliError>,
{
    let mut worst = 0.0f64;
    for beta in items {
        let v = f(beta)?;
        worst = if v.is_nan() { f64::NAN } else { worst.max(v) };
    }
    Ok(worst)
}

fn displacement_cross_method(
    c: &RunConfig,
    _: &TeleportParams,
) -> Result<(f64, Option<String>), CliError> {
    let block = c.cutoff / 2;
    let v = max_over(
        probe_betas(c.beta_max.min(DISPLACEMENT_BETA_LIMIT)),
        |beta| {
            let d = displacement_closed_form(beta, c.cutoff)?;
            let e = displacement_exponential(beta, c.cutoff)?;
            Ok(d.max_block_deviation(&e, block)?)
        },
    )?;
    Ok((v, Some(format!("leading {block}x{block} block"))))
}

fn displacement_unitarity(
    c: &RunConfig,
    _: &TeleportParams,
) -> Result<(f64, Option<String>), CliError> {
    let top = (c.cutoff / 4).min(16);
    let v = max_over(
        probe_betas(c.beta_max.min(DISPLACEMENT_BETA_LIMIT)),
        |beta| {
            let there = displacement_closed_form(beta, c.cutoff)?;
            let back = displacement_closed_form(-beta, c.cutoff)?;
            let round = back.compose(&there)?;
            let mut worst = 0.0f64;
            for n in 0..=top {
                let v = FockVector::basis_state(n, c.cutoff)?;
                worst = worst.max(apply(&round, &v)?.distance(&v)?);
            }
            Ok(worst)
        },
    )?;
    Ok((v, Some(format!("number states n <= {top}"))))
}

fn transfer_covariance(
    c: &RunConfig,
    p: &TeleportParams,
) -> Result<(f64, Option<String>), CliError> {
    let t0 = transfer_operator(p, Complex64::new(0.0, 0.0))?;
    let block = c.cutoff / 2;
    let v = max_over(
        probe_betas(c.beta_max.min(DISPLACEMENT_BETA_LIMIT)),
        |beta| {
            let d = displacement_closed_form(beta, c.cutoff)?;
            let d_inv = displacement_closed_form(-beta, c.cutoff)?;
            let rebuilt = d.compose(&t0)?.compose(&d_inv)?;
            Ok(transfer_operator(p, beta)?.max_block_deviation(&rebuilt, block)?)
        },
    )?;
    Ok((v, None))
}

fn single_photon_output(
    c: &RunConfig,
    p: &TeleportParams,
) -> Result<(f64, Option<String>), CliError> {
    let one = FockVector::basis_state(1, c.cutoff)?;
    let v = max_over(probe_betas(c.beta_max), |beta| {
        let (numeric, _) = apply_channel(p, beta, &one)?;
        let closed = single_photon_output_unnormalized(c.q, beta, c.cutoff)?;
        Ok(numeric.distance(&closed)?)
    })?;
    Ok((v, None))
}

fn single_photon_density_check(
    c: &RunConfig,
    p: &TeleportParams,
) -> Result<(f64, Option<String>), CliError> {
    let one = FockVector::basis_state(1, c.cutoff)?;
    let v = max_over(probe_betas(c.beta_max), |beta| {
        let (_, density) = apply_channel(p, beta, &one)?;
        Ok((density - single_photon_density(c.q, beta)?).abs())
    })?;
    Ok((v, None))
}

fn coherence_oracle(c: &RunConfig, p: &TeleportParams) -> Result<(f64, Option<String>), CliError> {
    let one = FockVector::basis_state(1, c.cutoff)?;
    let betas = probe_betas(c.beta_max)
        .into_iter()
        .filter(|b| !(c.q == 0.0 && b.norm() == 0.0));
    let v = max_over(betas, |beta| {
        let out = conditional_output(p, beta, &one)?;
        Ok((field_expectation(&out)? - coherence_analytic(c.q, beta)?.value).norm())
    })?;
    Ok((v, None))
}

fn truncation_tail_mass(
    c: &RunConfig,
    p: &TeleportParams,
) -> Result<(f64, Option<String>), CliError> {
    let one = FockVector::basis_state(1, c.cutoff)?;
    let betas = probe_betas(c.beta_max)
        .into_iter()
        .filter(|b| !(c.q == 0.0 && b.norm() == 0.0));
    let mut worst = (0.0f64, Complex64::new(0.0, 0.0));
    for beta in betas {
        let tail = conditional_output(p, beta, &one)?.tail_mass();
        if tail >= worst.0 {
            worst = (tail, beta);
        }
    }
    Ok((worst.0, Some(format!("tail_mass at beta = {:.4}", worst.1))))
}

fn probability_normalization(
    c: &RunConfig,
    p: &TeleportParams,
) -> Result<(f64, Option<String>), CliError> {
    let one = FockVector::basis_state(1, c.cutoff)?;
    let radius = 12.0 / (1.0 - c.q * c.q).sqrt();
    let grid = QuadratureGrid::polar(radius, GridSpec::new(96, 64))?;
    let total = integrate_density(p, &one, &grid)?;
    Ok((
        (total - 1.0).abs(),
        Some(format!("integral {}", csv::float(total))),
    ))
}

fn completeness(c: &RunConfig, p: &TeleportParams) -> Result<(f64, Option<String>), CliError> {
    let block = (c.cutoff / 2).min(8);
    let radius = 8.0 / (1.0 - c.q * c.q).sqrt();
    let v = completeness_defect_block(p, radius, GridSpec::new(64, 64), block)?;
    Ok((v, Some(format!("leading {block}x{block} block"))))
}

const SUITES: [(&str, f64, Suite); 9] = [
    ("displacement_cross_method", 1e-9, displacement_cross_method),
    ("displacement_unitarity", 1e-8, displacement_unitarity),
    ("transfer_covariance", 1e-9, transfer_covariance),
    ("single_photon_output", 1e-9, single_photon_output),
    ("single_photon_density", 1e-10, single_photon_density_check),
    ("coherence_oracle", f64::NAN, coherence_oracle),
    ("truncation_tail_mass", 1e-10, truncation_tail_mass),
    ("probability_normalization", 1e-4, probability_normalization),
    ("completeness_defect", 1e-4, completeness),
];

/// Runs every suite. The coherence suite uses the configured tolerance.
pub fn run_checks(config: &RunConfig) -> Result<CheckReport, CliError> {
    let p = config.params()?;
    let results = SUITES
        .iter()
        .map(|&(name, tol, suite)| {
            let tolerance = if tol.is_nan() { config.tolerance } else { tol };
            match suite(config, &p) {
                Ok((measured, detail)) => CheckResult {
                    name,
                    measured,
                    tolerance,
                    detail,
                },
                Err(e) => CheckResult {
                    name,
                    measured: f64::NAN,
                    tolerance,
                    detail: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(CheckReport { results })
}

/// Runs the suites and writes the report (default `check_report.txt`).
pub fn cmd_check(config: &RunConfig) -> Result<CheckReport, CliError> {
    let report = run_checks(config)?;
    csv::write(&config.output_or("check_report.txt"), &report.render())?;
    Ok(report)
}
