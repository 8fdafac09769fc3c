use super::check_len;
use crate::error::{Error, Result};

/// Dense `A = LLᵀ` factorization.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    // Row-major lower triangle; the upper part is zero.
    l: Vec<f64>,
}

impl Cholesky {
    /// Factors the row-major symmetric matrix `a`. Fails on the first pivot
    /// that is not strictly positive.
    pub fn factor(n: usize, a: &[f64]) -> Result<Self> {
        check_len(n * n, a.len())?;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut pivot = a[j * n + j];
            for k in 0..j {
                pivot -= l[j * n + k] * l[j * n + k];
            }
            if pivot.is_nan() || pivot <= 0.0 {
                return Err(Error::NotPositiveDefinite { pivot: j, value: pivot });
            }
            let ljj = pivot.sqrt();
            l[j * n + j] = ljj;
            for i in (j + 1)..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / ljj;
            }
        }
        Ok(Self { n, l })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Solves `Ax = rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, rhs.len())?;
        let n = self.n;
        let mut y = rhs.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for (l, yk) in self.l[i * n..i * n + i].iter().zip(&y[..i]) {
                s -= l * yk;
            }
            y[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for (k, yk) in y.iter().enumerate().skip(i + 1) {
                s -= self.l[k * n + i] * yk;
            }
            y[i] = s / self.l[i * n + i];
        }
        Ok(y)
    }

    /// Product of the squared pivots.
    pub fn determinant(&self) -> f64 {
        (0..self.n).map(|i| self.l[i * self.n + i].powi(2)).product()
    }
}
