use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected cutoff {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate outcome at beta = {beta}: density {density:e} vanishes")]
    DegenerateOutcome { beta: Complex64, density: f64 },
    #[error("quadrature error: {0}")]
    Quadrature(String),
    #[error("envelope violated at beta = {beta}: density {density:e} exceeds bound {bound:e}")]
    Envelope {
        beta: Complex64,
        density: f64,
        bound: f64,
    },
}
