//! Truncated photon-number basis: state vectors and dense operators.
//!
//! Index `n` of every vector and operator is the photon number, running
//! over `0..cutoff`. Amplitudes beyond the cutoff are dropped, so any
//! quantity that leaks into the highest indices should be checked with
//! [`FockVector::tail_mass`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default photon-number cutoff.
pub const DEFAULT_CUTOFF: usize = 64;

/// Largest cutoff supported by the closed-form displacement.
pub const MAX_CUTOFF: usize = 256;

/// Tolerance on the squared norm of freshly constructed normalized states.
pub const CONSTRUCTION_TOLERANCE: f64 = 1e-12;

/// Tolerance on the squared norm for operations that require normalized input.
pub const PRECONDITION_TOLERANCE: f64 = 1e-9;

/// Cutoff that keeps the tail of a displaced low-occupation state negligible.
///
/// Returns `ceil(4 (|beta| + 3)^2)`, capped at [`MAX_CUTOFF`].
pub fn recommended_cutoff(beta: Complex64) -> usize {
    let r = beta.norm();
    if !r.is_finite() {
        return MAX_CUTOFF;
    }
    let c = (4.0 * (r + 3.0).powi(2)).ceil();
    if c >= MAX_CUTOFF as f64 {
        MAX_CUTOFF
    } else {
        c as usize
    }
}

pub(crate) fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff == 0 {
        return Err(Error::Domain("cutoff must be positive".into()));
    }
    if cutoff > MAX_CUTOFF {
        return Err(Error::Domain(format!(
            "cutoff {cutoff} exceeds the supported maximum {MAX_CUTOFF}"
        )));
    }
    Ok(())
}

pub(crate) fn check_beta(beta: Complex64) -> Result<()> {
    if beta.re.is_finite() && beta.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("beta must be finite, got {beta}")))
    }
}

/// Complex amplitudes over the photon-number basis `|0>, ..., |cutoff-1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: DVector<Complex64>,
}

impl FockVector {
    pub fn zeros(cutoff: usize) -> Result<Self> {
        check_cutoff(cutoff)?;
        Ok(Self {
            amplitudes: DVector::zeros(cutoff),
        })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_cutoff(amplitudes.len())?;
        Ok(Self {
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    pub(crate) fn from_dvector(amplitudes: DVector<Complex64>) -> Self {
        Self { amplitudes }
    }

    /// The number state `|n>`.
    pub fn basis_state(n: usize, cutoff: usize) -> Result<Self> {
        check_cutoff(cutoff)?;
        if n >= cutoff {
            return Err(Error::Domain(format!(
                "photon number {n} is outside the truncated basis of size {cutoff}"
            )));
        }
        let mut v = DVector::zeros(cutoff);
        v[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    /// Truncated coherent state `e^{-|beta|^2/2} sum beta^n / sqrt(n!) |n>`.
    ///
    /// Built from the series directly, not from a displacement, so it can
    /// serve as a reference for both displacement routines.
    pub fn coherent(beta: Complex64, cutoff: usize) -> Result<Self> {
        check_cutoff(cutoff)?;
        check_beta(beta)?;
        let mut v = DVector::zeros(cutoff);
        let mut term = Complex64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
        for n in 0..cutoff {
            v[n] = term;
            term *= beta / ((n + 1) as f64).sqrt();
        }
        Ok(Self { amplitudes: v })
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amplitudes[n]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tolerance: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tolerance
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() <= PRECONDITION_TOLERANCE {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm_sqr })
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amplitudes: &self.amplitudes * factor,
        }
    }

    /// Returns the vector divided by its norm.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain(format!(
                "cannot normalize a vector of norm {norm}"
            )));
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    /// Fraction of the squared norm carried by the top 10% of indices
    /// (at least one index).
    pub fn tail_mass(&self) -> f64 {
        let total = self.norm_sqr();
        if total == 0.0 {
            return 0.0;
        }
        let n = self.cutoff();
        let width = (n / 10).max(1);
        let tail: f64 = self.amplitudes.as_slice()[n - width..]
            .iter()
            .map(|c| c.norm_sqr())
            .sum();
        tail / total
    }

    /// `<v| n |v> / <v|v>`.
    pub fn mean_photon_number(&self) -> f64 {
        let total = self.norm_sqr();
        if total == 0.0 {
            return 0.0;
        }
        let weighted: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum();
        weighted / total
    }

    /// Euclidean distance `||self - other||`.
    pub fn distance(&self, other: &FockVector) -> Result<f64> {
        check_same(self.cutoff(), other.cutoff())?;
        Ok((&self.amplitudes - &other.amplitudes).norm())
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &FockVector) -> Result<f64> {
        Ok(inner_product(self, other)?.norm_sqr())
    }
}

fn check_same(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

/// Dense square operator on the truncated basis, indexed `<m|op|n>` as `(m, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator {
    entries: DMatrix<Complex64>,
}

impl ComplexOperator {
    pub fn identity(cutoff: usize) -> Result<Self> {
        check_cutoff(cutoff)?;
        Ok(Self {
            entries: DMatrix::identity(cutoff, cutoff),
        })
    }

    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::Dimension {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        check_cutoff(entries.nrows())?;
        Ok(Self { entries })
    }

    pub(crate) fn from_matrix_unchecked(entries: DMatrix<Complex64>) -> Self {
        Self { entries }
    }

    pub fn cutoff(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    /// `<m|op|n>`.
    pub fn element(&self, m: usize, n: usize) -> Complex64 {
        self.entries[(m, n)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    /// Operator product `self * rhs`.
    pub fn compose(&self, rhs: &ComplexOperator) -> Result<Self> {
        check_same(self.cutoff(), rhs.cutoff())?;
        Ok(Self {
            entries: &self.entries * &rhs.entries,
        })
    }

    /// Largest entrywise deviation on the leading `block x block` sub-matrix.
    pub fn max_block_deviation(&self, other: &ComplexOperator, block: usize) -> Result<f64> {
        check_same(self.cutoff(), other.cutoff())?;
        let block = block.min(self.cutoff());
        let mut worst = 0.0f64;
        for n in 0..block {
            for m in 0..block {
                worst = worst.max((self.entries[(m, n)] - other.entries[(m, n)]).norm());
            }
        }
        Ok(worst)
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self
            .entries
            .clone()
            .singular_values()
            .iter()
            .copied()
            .collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }
}

/// Ladder operator with `<n-1|a|n> = sqrt(n)`.
pub fn annihilation_operator(cutoff: usize) -> Result<ComplexOperator> {
    if cutoff < 2 {
        return Err(Error::Domain(format!(
            "annihilation operator needs cutoff >= 2, got {cutoff}"
        )));
    }
    check_cutoff(cutoff)?;
    let mut a = DMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    Ok(ComplexOperator { entries: a })
}

/// Matrix-vector product. The result is not renormalized.
pub fn apply(op: &ComplexOperator, v: &FockVector) -> Result<FockVector> {
    check_same(op.cutoff(), v.cutoff())?;
    Ok(FockVector {
        amplitudes: &op.entries * &v.amplitudes,
    })
}

/// `<u|v>`, antilinear in the first argument.
pub fn inner_product(u: &FockVector, v: &FockVector) -> Result<Complex64> {
    check_same(u.cutoff(), v.cutoff())?;
    Ok(u.amplitudes.dotc(&v.amplitudes))
}

/// Mean complex field amplitude `<v|a|v>` of a normalized state.
///
/// Evaluated as `sum_n conj(c_{n-1}) sqrt(n) c_n`, which is exactly zero for
/// number states.
pub fn field_expectation(v: &FockVector) -> Result<Complex64> {
    v.require_normalized()?;
    let c = v.amplitudes.as_slice();
    Ok(c.windows(2)
        .enumerate()
        .map(|(i, w)| w[0].conj() * w[1] * ((i + 1) as f64).sqrt())
        .sum())
}
