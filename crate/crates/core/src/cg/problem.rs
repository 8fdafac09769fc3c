use crate::error::Result;
use crate::linalg::{check_finite, check_len, dot_unchecked, SpdMatrix};

/// `f(x) = ½xᵀAx + bᵀx` with SPD `A`; the minimizer solves `Ax = −b`.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    a: SpdMatrix,
    b: Vec<f64>,
}

impl QuadraticProblem {
    pub fn new(a: SpdMatrix, b: Vec<f64>) -> Result<Self> {
        check_len(a.order(), b.len())?;
        check_finite(&b)?;
        Ok(Self { a, b })
    }

    /// Sets `b = −Ax*` so that `x*` is the minimizer.
    pub fn with_solution(a: SpdMatrix, x_star: &[f64]) -> Result<Self> {
        check_finite(x_star)?;
        let b = a.matvec(x_star)?.into_iter().map(|v| -v).collect();
        Self::new(a, b)
    }

    pub fn dim(&self) -> usize {
        self.a.order()
    }

    pub fn matrix(&self) -> &SpdMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    /// `∇f(x) = Ax + b`
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut g = self.a.matvec(x)?;
        g.iter_mut().zip(&self.b).for_each(|(gi, bi)| *gi += bi);
        Ok(g)
    }

    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        let ax = self.a.matvec(x)?;
        Ok(0.5 * dot_unchecked(x, &ax) + dot_unchecked(&self.b, x))
    }

    /// `(cA, cb)`; same minimizer, objective scaled by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.a.scaled(c)?, self.b.iter().map(|v| c * v).collect())
    }
}
