use std::ops::Deref;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{dot_unchecked, norm, Cholesky, SymMatrix};
use crate::error::{Error, Result};

/// Sparse matrices up to this order are densified and factored.
pub const DENSIFY_LIMIT: usize = 2000;
/// Random probes used above [`DENSIFY_LIMIT`].
pub const PROBE_SAMPLES: usize = 32;

const PROBE_SEED: u64 = 0x5eed_5bd0;

/// How positive definiteness was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpdCertificate {
    /// A Cholesky factorization with positive pivots exists.
    Factorized,
    /// `vᵀAv > 0` for every sampled probe vector; not a proof.
    Probable { samples: usize },
}

/// Succeeds iff `a` is positive definite (or probably so for large sparse
/// input). Symmetry is already guaranteed by [`SymMatrix`] construction.
pub fn spd_validate(a: &SymMatrix) -> Result<SpdCertificate> {
    let n = a.order();
    if !a.is_sparse() || n <= DENSIFY_LIMIT {
        Cholesky::factor(n, &a.to_dense())?;
        return Ok(SpdCertificate::Factorized);
    }
    for i in 0..n {
        let d = a.get(i, i);
        if d <= 0.0 {
            return Err(Error::NotPositiveDefinite { pivot: i, value: d });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    for s in 0..PROBE_SAMPLES {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let q = dot_unchecked(&v, &a.matvec(&v)?);
        if q <= 0.0 {
            return Err(Error::NotPositiveDefinite { pivot: s, value: q });
        }
    }
    Ok(SpdCertificate::Probable { samples: PROBE_SAMPLES })
}

/// A [`SymMatrix`] that passed [`spd_validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpdMatrix {
    matrix: SymMatrix,
    certificate: SpdCertificate,
}

impl SpdMatrix {
    pub fn new(matrix: SymMatrix) -> Result<Self> {
        let certificate = spd_validate(&matrix)?;
        Ok(Self { matrix, certificate })
    }

    pub fn certificate(&self) -> SpdCertificate {
        self.certificate
    }

    pub fn as_sym(&self) -> &SymMatrix {
        &self.matrix
    }

    pub fn into_inner(self) -> SymMatrix {
        self.matrix
    }

    /// `c·A` for `c > 0`; positive definiteness is preserved.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidSpec(format!("scale factor {c} must be positive")));
        }
        Ok(Self {
            matrix: self.matrix.scaled(c),
            certificate: self.certificate,
        })
    }

    pub fn cholesky(&self) -> Result<Cholesky> {
        Cholesky::factor(self.order(), &self.to_dense())
    }
}

impl Deref for SpdMatrix {
    type Target = SymMatrix;

    fn deref(&self) -> &SymMatrix {
        &self.matrix
    }
}

const POWER_ITERATIONS: usize = 300;

/// Estimates `λmax/λmin` with power iteration for the largest eigenvalue and
/// Cholesky-based inverse iteration for the smallest. Returns infinity when
/// the matrix is too ill-conditioned to factor.
pub fn condition_estimate(a: &SpdMatrix) -> Result<f64> {
    let n = a.order();
    if n == 1 {
        return Ok(1.0);
    }
    let start: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64 * 0.618_033_988_7).fract()).collect();

    let lambda_max = rayleigh_iterate(&start, |v| a.matvec(v))?;
    let chol = match a.cholesky() {
        Ok(c) => c,
        Err(Error::NotPositiveDefinite { .. }) => return Ok(f64::INFINITY),
        Err(e) => return Err(e),
    };
    let inv_max = rayleigh_iterate(&start, |v| chol.solve(v))?;
    if !(inv_max.is_finite() && inv_max > 0.0) {
        return Ok(f64::INFINITY);
    }
    Ok(lambda_max * inv_max)
}

fn rayleigh_iterate<F>(start: &[f64], apply: F) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let mut v = start.to_vec();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut estimate = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w = apply(&v)?;
        let next = dot_unchecked(&v, &w);
        let wn = norm(&w);
        if wn == 0.0 {
            return Ok(0.0);
        }
        v = w.into_iter().map(|x| x / wn).collect();
        if (next - estimate).abs() <= 1e-12 * next.abs() {
            return Ok(next);
        }
        estimate = next;
    }
    Ok(estimate)
}
