//! The displacement operator `D(beta) = exp(beta a^dag - beta^* a)`.
//!
//! Two unrelated routes are provided. [`displacement_closed_form`] evaluates
//! the exact matrix elements of the infinite-dimensional operator restricted
//! to the truncated basis (associated Laguerre form). [`displacement_exponential`]
//! exponentiates the truncated generator, which is exactly unitary on the
//! truncated space but deviates from the true operator near the cutoff.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::fock::{annihilation_operator, check_beta, check_cutoff, ComplexOperator};
use crate::laguerre::{laguerre_sequence, ln_factorials};

/// Closed-form matrix elements.
///
/// For `m >= n`:
/// `<m|D|n> = sqrt(n!/m!) beta^(m-n) e^{-|beta|^2/2} L_n^(m-n)(|beta|^2)`,
/// and `<n|D|m>` is the same magnitude with phase `(-beta^*)^(m-n)`.
pub fn displacement_closed_form(beta: Complex64, cutoff: usize) -> Result<ComplexOperator> {
    check_cutoff(cutoff)?;
    check_beta(beta)?;
    if beta == Complex64::new(0.0, 0.0) {
        return ComplexOperator::identity(cutoff);
    }
    let x = beta.norm_sqr();
    let ln_r = beta.norm().ln();
    let arg = beta.arg();
    let lf = ln_factorials(cutoff);
    let mut d = DMatrix::zeros(cutoff, cutoff);
    for offset in 0..cutoff {
        let lower = Complex64::from_polar(1.0, offset as f64 * arg);
        // (-beta^*)^k / |beta|^k = (-1)^k e^{-i k arg}
        let sign = if offset % 2 == 0 { 1.0 } else { -1.0 };
        let upper = Complex64::from_polar(sign, -(offset as f64) * arg);
        let lag = laguerre_sequence(cutoff - offset, offset as f64, x);
        for (n, value) in lag.into_iter().enumerate() {
            let m = n + offset;
            let log_factor = 0.5 * (lf[n] - lf[m]) + offset as f64 * ln_r - 0.5 * x;
            let magnitude = value.times_exp(log_factor);
            d[(m, n)] = lower * magnitude;
            if offset > 0 {
                d[(n, m)] = upper * magnitude;
            }
        }
    }
    Ok(ComplexOperator::from_matrix_unchecked(d))
}

/// `exp(beta a^dag - beta^* a)` on the truncated space, by scaling and
/// squaring of a Taylor series.
pub fn displacement_exponential(beta: Complex64, cutoff: usize) -> Result<ComplexOperator> {
    check_cutoff(cutoff)?;
    check_beta(beta)?;
    if cutoff == 1 {
        return ComplexOperator::identity(1);
    }
    let a = annihilation_operator(cutoff)?.into_entries();
    let generator = a.adjoint() * beta - a * beta.conj();
    Ok(ComplexOperator::from_matrix_unchecked(expm(&generator)))
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential; the scaled argument has 1-norm at most 1/4 so the
/// Taylor series converges to machine precision within 20 terms.
pub(crate) fn expm(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    let norm = one_norm(m);
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m * Complex64::new(0.5f64.powi(squarings), 0.0);
    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=30 {
        term = (&term * &scaled) * Complex64::new(1.0 / k as f64, 0.0);
        result += &term;
        if one_norm(&term) <= f64::EPSILON * 1e-3 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}
