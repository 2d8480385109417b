//! Polar quadrature over a disc in the complex plane.
//!
//! Radial nodes are Gauss-Legendre on `[0, R]` with the `r` Jacobian folded
//! into the weights; angles are uniform, which integrates trigonometric
//! polynomials of degree below the angle count exactly.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::{transfer_operator, TeleportParams};
use crate::error::{Error, Result};
use crate::fock::FockVector;

/// Node counts of a polar grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub radial: usize,
    pub angular: usize,
}

impl GridSpec {
    pub fn new(radial: usize, angular: usize) -> Self {
        Self { radial, angular }
    }

    pub fn doubled(self) -> Self {
        Self::new(2 * self.radial, 2 * self.angular)
    }

    pub fn halved(self) -> Self {
        Self::new(self.radial.div_ceil(2), self.angular.div_ceil(2))
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut deriv = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            deriv = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / deriv;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        out[n - 1 - i] = (x, w);
        out[i] = (-x, w);
    }
    out
}

/// Neumaier-compensated sum.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Tensor-product polar grid on the disc `|beta| <= radius_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    radial_nodes: Vec<(f64, f64)>,
    angular_count: usize,
    radius_max: f64,
}

impl QuadratureGrid {
    /// A zero radius gives an empty grid that integrates everything to zero.
    pub fn polar(radius: f64, spec: GridSpec) -> Result<Self> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::Quadrature(format!(
                "radius must be finite and >= 0, got {radius}"
            )));
        }
        if spec.radial == 0 || spec.angular == 0 {
            return Err(Error::Quadrature(format!(
                "degenerate grid: {} radial x {} angular nodes",
                spec.radial, spec.angular
            )));
        }
        let radial_nodes = if radius == 0.0 {
            Vec::new()
        } else {
            let half = 0.5 * radius;
            gauss_legendre(spec.radial)
                .into_iter()
                .map(|(x, w)| {
                    let r = half * (x + 1.0);
                    (r, half * w * r)
                })
                .collect()
        };
        let grid = Self {
            radial_nodes,
            angular_count: spec.angular,
            radius_max: radius,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Checks positivity of the weights and that the grid reproduces the disc area.
    pub fn validate(&self) -> Result<()> {
        if self.angular_count == 0 {
            return Err(Error::Quadrature("no angular nodes".into()));
        }
        if let Some(&(r, w)) = self
            .radial_nodes
            .iter()
            .find(|&&(r, w)| !w.is_finite() || w <= 0.0 || !(0.0..=self.radius_max).contains(&r))
        {
            return Err(Error::Quadrature(format!("invalid radial node ({r}, {w})")));
        }
        let area = self.area();
        let expected = PI * self.radius_max * self.radius_max;
        if (area - expected).abs() > 1e-12 * expected.max(1.0) {
            return Err(Error::Quadrature(format!(
                "grid area {area} does not reproduce pi R^2 = {expected}"
            )));
        }
        Ok(())
    }

    pub fn radial_nodes(&self) -> &[(f64, f64)] {
        &self.radial_nodes
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    pub fn radius_max(&self) -> f64 {
        self.radius_max
    }

    pub fn angular_spacing(&self) -> f64 {
        2.0 * PI / self.angular_count as f64
    }

    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        let step = self.angular_spacing();
        (0..self.angular_count).map(move |k| k as f64 * step)
    }

    /// Sum of all node weights.
    pub fn area(&self) -> f64 {
        neumaier_sum(self.radial_nodes.iter().map(|&(_, w)| w)) * 2.0 * PI
    }

    /// Every node `(beta, weight)` in radial-major order.
    pub fn nodes(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        let dtheta = self.angular_spacing();
        self.radial_nodes.iter().flat_map(move |&(r, w)| {
            (0..self.angular_count)
                .map(move |k| (Complex64::from_polar(r, k as f64 * dtheta), w * dtheta))
        })
    }

    /// Integral of a real function over the disc.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(Complex64) -> f64 + Sync,
    {
        let dtheta = self.angular_spacing();
        let rings: Vec<f64> = self
            .radial_nodes
            .par_iter()
            .map(|&(r, w)| {
                let ring = neumaier_sum(
                    (0..self.angular_count).map(|k| f(Complex64::from_polar(r, k as f64 * dtheta))),
                );
                ring * w * dtheta
            })
            .collect();
        neumaier_sum(rings)
    }
}

/// Quadrature value with a node-halving error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityIntegral {
    pub value: f64,
    pub error_estimate: f64,
}

/// Total outcome probability `int P(beta) d^2beta` over the grid's disc.
///
/// Uses `T(r e^{i theta}) = R(theta) T(r) R(theta)^dag` with
/// `R(theta) = diag(e^{i n theta})`, so the transfer operator is built once
/// per radial node.
pub fn integrate_density(
    p: &TeleportParams,
    input: &FockVector,
    grid: &QuadratureGrid,
) -> Result<f64> {
    grid.validate()?;
    input.require_normalized()?;
    if input.cutoff() != p.cutoff() {
        return Err(Error::Dimension {
            expected: p.cutoff(),
            found: input.cutoff(),
        });
    }
    let n = p.cutoff();
    let angles: Vec<f64> = grid.angles().collect();
    // Column k holds R(theta_k)^dag |input>.
    let rotated = DMatrix::from_fn(n, angles.len(), |m, k| {
        input.amplitude(m) * Complex64::from_polar(1.0, -(m as f64) * angles[k])
    });
    let dtheta = grid.angular_spacing();
    let rings: Vec<f64> = grid
        .radial_nodes()
        .par_iter()
        .map(|&(r, w)| -> Result<f64> {
            let t = transfer_operator(p, Complex64::new(r, 0.0))?;
            let out = t.entries() * &rotated;
            let ring = neumaier_sum(out.column_iter().map(|col| col.norm_squared()));
            Ok(ring * w * dtheta)
        })
        .collect::<Result<_>>()?;
    Ok(neumaier_sum(rings))
}

/// [`integrate_density`] plus the change against a grid with half the nodes.
pub fn integrate_density_with_error(
    p: &TeleportParams,
    input: &FockVector,
    radius: f64,
    spec: GridSpec,
) -> Result<DensityIntegral> {
    let value = integrate_density(p, input, &QuadratureGrid::polar(radius, spec)?)?;
    let coarse = integrate_density(p, input, &QuadratureGrid::polar(radius, spec.halved())?)?;
    Ok(DensityIntegral {
        value,
        error_estimate: (value - coarse)
            .abs()
            .max(64.0 * f64::EPSILON * value.abs()),
    })
}
