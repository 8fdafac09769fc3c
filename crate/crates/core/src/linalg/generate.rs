use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{SpdMatrix, SymMatrix};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Placement of eigenvalues between `min` and `max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    /// Geometric spacing, both endpoints included.
    LogUniform,
    /// Arithmetic spacing, both endpoints included.
    Linear,
    /// Up to four tight groups at log-spaced centres; the extremes are kept
    /// exactly at `min` and `max`.
    Clustered,
}

const CLUSTER_WIDTH: f64 = 1e-3;
const MAX_CLUSTERS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumSpec {
    Explicit(Vec<f64>),
    Range {
        min: f64,
        max: f64,
        distribution: Distribution,
    },
}

impl SpectrumSpec {
    /// Log-uniform spectrum on `[1, condition]`.
    pub fn with_condition(condition: f64) -> Self {
        SpectrumSpec::Range {
            min: 1.0,
            max: condition,
            distribution: Distribution::LogUniform,
        }
    }

    pub fn eigenvalues(&self, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::InvalidSpectrum("order must be positive".into()));
        }
        let values = match self {
            SpectrumSpec::Explicit(v) => {
                if v.len() != n {
                    return Err(Error::InvalidSpectrum(format!(
                        "{} eigenvalues given for order {n}",
                        v.len()
                    )));
                }
                v.clone()
            }
            &SpectrumSpec::Range { min, max, distribution } => {
                if !(min > 0.0 && min.is_finite() && max.is_finite()) || min > max {
                    return Err(Error::InvalidSpectrum(format!(
                        "need 0 < min <= max, got [{min}, {max}]"
                    )));
                }
                spaced(n, min, max, distribution)
            }
        };
        if let Some(bad) = values.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidSpectrum(format!("eigenvalue {bad} is not positive")));
        }
        Ok(values)
    }
}

fn spaced(n: usize, min: f64, max: f64, distribution: Distribution) -> Vec<f64> {
    if n == 1 {
        return vec![min];
    }
    let t = |i: usize| i as f64 / (n - 1) as f64;
    let ratio = max / min;
    let mut v: Vec<f64> = match distribution {
        Distribution::LogUniform => (0..n).map(|i| min * ratio.powf(t(i))).collect(),
        Distribution::Linear => (0..n).map(|i| min + (max - min) * t(i)).collect(),
        Distribution::Clustered => {
            let groups = n.min(MAX_CLUSTERS);
            let centre = |c: usize| {
                if groups == 1 {
                    min
                } else {
                    min * ratio.powf(c as f64 / (groups - 1) as f64)
                }
            };
            (0..n)
                .map(|i| {
                    let c = i * groups / n;
                    let first = (c * n).div_ceil(groups);
                    let size = ((c + 1) * n).div_ceil(groups) - first;
                    let offset = if size > 1 {
                        CLUSTER_WIDTH * (i - first) as f64 / (size - 1) as f64
                    } else {
                        0.0
                    };
                    // the top group spreads downward so max stays attained
                    let factor = if c + 1 == groups && groups > 1 {
                        1.0 - offset
                    } else {
                        1.0 + offset
                    };
                    (centre(c) * factor).clamp(min, max)
                })
                .collect()
        }
    };
    if distribution == Distribution::Clustered {
        v.sort_by(f64::total_cmp);
    } else {
        v[0] = min;
        v[n - 1] = max;
    }
    v
}

/// Orthogonal `n × n` matrix (row-major) from a seeded Gaussian matrix via
/// modified Gram-Schmidt on its columns with one re-orthogonalization pass.
pub fn random_orthogonal(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // columns stored contiguously while orthogonalizing
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect())
        .collect();
    for j in 0..n {
        let (done, rest) = cols.split_at_mut(j);
        let col = &mut rest[0];
        for _pass in 0..2 {
            for q in done.iter() {
                let r: f64 = q.iter().zip(col.iter()).map(|(a, b)| a * b).sum();
                col.iter_mut().zip(q).for_each(|(c, qi)| *c -= r * qi);
            }
        }
        let nrm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        col.iter_mut().for_each(|c| *c /= nrm);
    }
    let mut q = vec![0.0; n * n];
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            q[i * n + j] = *v;
        }
    }
    q
}

/// `QΛQᵀ` with `Λ` from `spec` and `Q` from [`random_orthogonal`].
/// Deterministic in `(n, spec, seed)`; stored dense and exactly symmetric.
pub fn generate_spd(n: usize, spec: &SpectrumSpec, seed: u64) -> Result<SpdMatrix> {
    let lambda = spec.eigenvalues(n)?;
    let q = random_orthogonal(n, seed);
    let mut a = vec![0.0; n * n];
    par::fill_indexed(Execution::Auto, &mut a, |idx| {
        let (i, j) = (idx / n, idx % n);
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let (qi, qj) = (&q[i * n..(i + 1) * n], &q[j * n..(j + 1) * n]);
        qi.iter().zip(qj).zip(&lambda).map(|((a, b), l)| a * l * b).sum()
    });
    SpdMatrix::new(SymMatrix::from_dense(n, a)?)
}
