//! Generalized Laguerre polynomials `L_n^(alpha)(x)` by upward recurrence in `n`.
//!
//! Values are carried as a mantissa plus a natural-log scale so that the
//! sequence can be combined with tiny Gaussian prefactors without overflow.

/// Rescale once the running mantissa exceeds this magnitude.
const RESCALE_THRESHOLD: f64 = 1e150;

/// A Laguerre value `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl ScaledValue {
    pub fn value(self) -> f64 {
        self.mantissa * self.log_scale.exp()
    }

    /// `self * exp(log_factor)`, evaluated without intermediate overflow.
    pub fn times_exp(self, log_factor: f64) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        self.mantissa.signum() * (self.mantissa.abs().ln() + self.log_scale + log_factor).exp()
    }
}

/// `L_0^(alpha)(x), ..., L_{count-1}^(alpha)(x)` using
/// `(k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}`.
pub fn laguerre_sequence(count: usize, alpha: f64, x: f64) -> Vec<ScaledValue> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let mut log_scale = 0.0;
    let mut prev = 1.0;
    out.push(ScaledValue {
        mantissa: prev,
        log_scale,
    });
    if count == 1 {
        return out;
    }
    let mut cur = 1.0 + alpha - x;
    out.push(ScaledValue {
        mantissa: cur,
        log_scale,
    });
    for k in 1..count - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_THRESHOLD {
            prev /= RESCALE_THRESHOLD;
            cur /= RESCALE_THRESHOLD;
            log_scale += RESCALE_THRESHOLD.ln();
        }
        out.push(ScaledValue {
            mantissa: cur,
            log_scale,
        });
    }
    out
}

/// Single value `L_n^(alpha)(x)`.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    laguerre_sequence(n + 1, alpha, x)[n].value()
}

/// `ln(k!)` for `k = 0..count`.
pub(crate) fn ln_factorials(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut acc = 0.0;
    for k in 0..count {
        if k > 1 {
            acc += (k as f64).ln();
        }
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit sum `sum_j (-1)^j C(n+alpha, n-j) x^j / j!` for integer alpha.
    fn explicit(n: usize, alpha: usize, x: f64) -> f64 {
        let binom = |top: usize, k: usize| -> f64 {
            (0..k).fold(1.0, |acc, i| acc * (top - i) as f64 / (i + 1) as f64)
        };
        let mut sum = 0.0;
        let mut xj_over_jfact = 1.0;
        for j in 0..=n {
            if j > 0 {
                xj_over_jfact *= x / j as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binom(n + alpha, n - j) * xj_over_jfact;
        }
        sum
    }

    #[test]
    fn low_order_closed_forms() {
        let x = 0.7;
        let a = 2.0;
        assert_eq!(laguerre(0, a, x), 1.0);
        assert!((laguerre(1, a, x) - (1.0 + a - x)).abs() < 1e-15);
        let l2 = x * x / 2.0 - (a + 2.0) * x + (a + 2.0) * (a + 1.0) / 2.0;
        assert!((laguerre(2, a, x) - l2).abs() < 1e-14);
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        for &x in &[0.0, 0.25, 1.0, 4.0] {
            for alpha in 0..6 {
                for n in 0..20 {
                    let want = explicit(n, alpha, x);
                    let got = laguerre(n, alpha as f64, x);
                    assert!(
                        (got - want).abs() <= 1e-9 * want.abs().max(1.0),
                        "n={n} alpha={alpha} x={x}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn rescaling_keeps_values_finite() {
        let seq = laguerre_sequence(256, 255.0, 0.0);
        let last = seq[255];
        assert!(last.mantissa.is_finite());
        assert!(last.log_scale > 0.0);
        // ln L_n^(a)(0) = ln C(n+a, n)
        let lf = ln_factorials(511);
        let want = lf[510] - lf[255] - lf[255];
        let got = last.mantissa.abs().ln() + last.log_scale;
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn ln_factorial_table() {
        let lf = ln_factorials(6);
        assert_eq!(lf[0], 0.0);
        assert_eq!(lf[1], 0.0);
        assert!((lf[5] - 120f64.ln()).abs() < 1e-14);
    }
}
