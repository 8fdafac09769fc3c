use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::cg::QuadraticProblem;
use crate::error::{Error, Result};
use crate::linalg::{generate_spd, SpdMatrix, SpectrumSpec, SymMatrix};

/// Hilbert matrices beyond this order are not positive definite in f64.
pub const HILBERT_MAX_ORDER: usize = 12;

const RHS_STREAM: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinFamily {
    /// Tridiagonal `(−1, 2, −1)`, sparse.
    Laplacian1d,
    /// `H_ij = 1/(i+j−1)`, dense.
    Hilbert,
    /// Sparse diagonal with the given entries; `n` must match.
    Diagonal { eigenvalues: Vec<f64> },
    /// `QΛQᵀ` from [`generate_spd`].
    RandomSpd { spectrum: SpectrumSpec, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhsMode {
    Ones,
    Random {
        seed: u64,
    },
    /// `b = −Ax*`
    KnownSolution(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuiltinProblemSpec {
    pub family: BuiltinFamily,
    pub n: usize,
    pub rhs: RhsMode,
}

impl BuiltinProblemSpec {
    pub fn new(family: BuiltinFamily, n: usize, rhs: RhsMode) -> Self {
        Self { family, n, rhs }
    }

    /// Short human-readable description for trace metadata.
    pub fn describe(&self) -> String {
        let family = match &self.family {
            BuiltinFamily::Laplacian1d => "laplacian1d".to_string(),
            BuiltinFamily::Hilbert => "hilbert".to_string(),
            BuiltinFamily::Diagonal { .. } => "diagonal".to_string(),
            BuiltinFamily::RandomSpd { seed, .. } => format!("random_spd(seed={seed})"),
        };
        let rhs = match &self.rhs {
            RhsMode::Ones => "ones".to_string(),
            RhsMode::Random { seed } => format!("random(seed={seed})"),
            RhsMode::KnownSolution(_) => "known-solution".to_string(),
        };
        format!("{family} n={} b={rhs}", self.n)
    }
}

pub fn builtin_problem(spec: &BuiltinProblemSpec) -> Result<QuadraticProblem> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::InvalidSpec("n must be at least 1".into()));
    }
    let a = match &spec.family {
        BuiltinFamily::Laplacian1d => {
            let mut t = Vec::with_capacity(3 * n);
            for i in 0..n {
                t.push((i, i, 2.0));
                if i + 1 < n {
                    t.push((i, i + 1, -1.0));
                    t.push((i + 1, i, -1.0));
                }
            }
            SpdMatrix::new(SymMatrix::from_triplets(n, &t)?)?
        }
        BuiltinFamily::Hilbert => {
            if n > HILBERT_MAX_ORDER {
                return Err(Error::InvalidSpec(format!(
                    "hilbert is limited to n <= {HILBERT_MAX_ORDER}, got {n}"
                )));
            }
            let data = (0..n * n).map(|idx| 1.0 / ((idx / n + idx % n + 1) as f64)).collect();
            SpdMatrix::new(SymMatrix::from_dense(n, data)?)?
        }
        BuiltinFamily::Diagonal { eigenvalues } => {
            if eigenvalues.len() != n {
                return Err(Error::InvalidSpec(format!(
                    "{} diagonal entries for n = {n}",
                    eigenvalues.len()
                )));
            }
            if let Some(bad) = eigenvalues.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
                return Err(Error::InvalidSpec(format!("diagonal entry {bad} is not positive")));
            }
            SpdMatrix::new(SymMatrix::diagonal(eigenvalues)?)?
        }
        BuiltinFamily::RandomSpd { spectrum, seed } => generate_spd(n, spectrum, *seed)?,
    };
    match &spec.rhs {
        RhsMode::Ones => QuadraticProblem::new(a, vec![1.0; n]),
        RhsMode::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            // a separate stream, so `b` never replays the draws behind `Q` for a shared seed
            rng.set_stream(RHS_STREAM);
            let b = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            QuadraticProblem::new(a, b)
        }
        RhsMode::KnownSolution(x) => {
            if x.len() != n {
                return Err(Error::InvalidSpec(format!(
                    "known solution has {} entries for n = {n}",
                    x.len()
                )));
            }
            QuadraticProblem::with_solution(a, x)
        }
    }
}
