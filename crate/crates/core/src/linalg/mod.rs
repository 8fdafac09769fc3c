//! Dense vector kernels, symmetric matrix storage, SPD validation and
//! spectrum-controlled test matrix generation.

mod cholesky;
mod generate;
mod matrix;
mod spd;

pub use cholesky::Cholesky;
pub use generate::{generate_spd, random_orthogonal, Distribution, SpectrumSpec};
pub use matrix::{CsrMatrix, Storage, SymMatrix};
pub use spd::{condition_estimate, spd_validate, SpdCertificate, SpdMatrix, DENSIFY_LIMIT, PROBE_SAMPLES};

use crate::error::{Error, Result};

/// Inner product `Σ uᵢvᵢ`.
pub fn dot(u: &[f64], v: &[f64]) -> Result<f64> {
    check_len(u.len(), v.len())?;
    Ok(dot_unchecked(u, v))
}

pub(crate) fn dot_unchecked(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn norm(v: &[f64]) -> f64 {
    dot_unchecked(v, v).sqrt()
}

/// `y ← y + a·x`
pub fn axpy(a: f64, x: &[f64], y: &mut [f64]) -> Result<()> {
    check_len(y.len(), x.len())?;
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
    Ok(())
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn check_finite(v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}
