use serde::{Deserialize, Serialize};

use super::{check_finite, check_len, dot_unchecked};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Relative tolerance for accepting an input as symmetric.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Compressed sparse row storage of a square matrix. Both triangles are kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsrMatrix {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from 0-based `(row, col, value)` triplets. Duplicates are summed
    /// and columns within a row are sorted.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: i.max(j) + 1,
                });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { index: i * n + j });
            }
            rows[i].push((j, v));
        }
        let mut row_offsets = Vec::with_capacity(n + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for mut row in rows {
            row.sort_by_key(|&(j, _)| j);
            for (j, v) in row {
                if col_indices.len() > *row_offsets.last().unwrap() && *col_indices.last().unwrap() == j {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_indices.push(j);
                    values.push(v);
                }
            }
            row_offsets.push(col_indices.len());
        }
        Ok(Self {
            n,
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Entries of row `i` as `(col, value)`, ascending by column.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_offsets[i]..self.row_offsets[i + 1];
        self.col_indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let span = self.row_offsets[i]..self.row_offsets[i + 1];
        match self.col_indices[span.clone()].binary_search(&j) {
            Ok(p) => self.values[span.start + p],
            Err(_) => 0.0,
        }
    }

    fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (j, v) in self.row(i) {
            acc += v * x[j];
        }
        acc
    }

    fn to_dense(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                a[i * self.n + j] = v;
            }
        }
        a
    }

    #[allow(clippy::needless_range_loop)]
    fn symmetrize(&mut self) -> Result<()> {
        let scale = self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tol = SYMMETRY_TOLERANCE * scale;
        let mut mirrored = self.values.clone();
        for i in 0..self.n {
            for p in self.row_offsets[i]..self.row_offsets[i + 1] {
                let j = self.col_indices[p];
                let a_ij = self.values[p];
                let a_ji = self.get(j, i);
                let difference = (a_ij - a_ji).abs();
                if difference > tol {
                    return Err(Error::Asymmetric {
                        row: i,
                        col: j,
                        difference,
                    });
                }
                mirrored[p] = 0.5 * (a_ij + a_ji);
            }
        }
        self.values = mirrored;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Storage {
    /// Row-major `n × n` entries.
    Dense(Vec<f64>),
    Csr(CsrMatrix),
}

/// Square symmetric matrix in dense or CSR storage.
///
/// Construction rejects inputs whose asymmetry exceeds
/// `1e-12 · max|aᵢⱼ|` and averages away any smaller mismatch, so the stored
/// entries are exactly symmetric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix {
    n: usize,
    storage: Storage,
}

impl SymMatrix {
    pub fn from_dense(n: usize, mut data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("matrix order must be positive".into()));
        }
        check_len(n * n, data.len())?;
        check_finite(&data)?;
        let scale = data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tol = SYMMETRY_TOLERANCE * scale;
        for i in 0..n {
            for j in (i + 1)..n {
                let (a_ij, a_ji) = (data[i * n + j], data[j * n + i]);
                let difference = (a_ij - a_ji).abs();
                if difference > tol {
                    return Err(Error::Asymmetric {
                        row: j,
                        col: i,
                        difference,
                    });
                }
                let mean = 0.5 * (a_ij + a_ji);
                data[i * n + j] = mean;
                data[j * n + i] = mean;
            }
        }
        Ok(Self {
            n,
            storage: Storage::Dense(data),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            check_len(n, row.len())?;
            data.extend_from_slice(row);
        }
        Self::from_dense(n, data)
    }

    pub fn from_csr(mut csr: CsrMatrix) -> Result<Self> {
        if csr.n == 0 {
            return Err(Error::InvalidSpec("matrix order must be positive".into()));
        }
        csr.symmetrize()?;
        Ok(Self {
            n: csr.n,
            storage: Storage::Csr(csr),
        })
    }

    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        Self::from_csr(CsrMatrix::from_triplets(n, triplets)?)
    }

    /// Sparse diagonal matrix.
    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        let triplets: Vec<_> = diag.iter().enumerate().map(|(i, &d)| (i, i, d)).collect();
        Self::from_triplets(diag.len(), &triplets)
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n]).expect("identity is symmetric")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Csr(_))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.storage {
            Storage::Dense(a) => a[i * self.n + j],
            Storage::Csr(c) => c.get(i, j),
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        match &self.storage {
            Storage::Dense(a) => a.clone(),
            Storage::Csr(c) => c.to_dense(),
        }
    }

    pub fn densified(&self) -> SymMatrix {
        SymMatrix {
            n: self.n,
            storage: Storage::Dense(self.to_dense()),
        }
    }

    pub fn sparsified(&self) -> SymMatrix {
        match &self.storage {
            Storage::Csr(_) => self.clone(),
            Storage::Dense(a) => {
                let mut triplets = Vec::new();
                for i in 0..self.n {
                    for j in 0..self.n {
                        let v = a[i * self.n + j];
                        if v != 0.0 {
                            triplets.push((i, j, v));
                        }
                    }
                }
                let csr = CsrMatrix::from_triplets(self.n, &triplets).expect("indices in range");
                SymMatrix {
                    n: self.n,
                    storage: Storage::Csr(csr),
                }
            }
        }
    }

    /// Stored entries; for dense storage every entry counts.
    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(a) => a.len(),
            Storage::Csr(c) => c.nnz(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        let values = match &self.storage {
            Storage::Dense(a) => a.as_slice(),
            Storage::Csr(c) => c.values(),
        };
        values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        let values = match &self.storage {
            Storage::Dense(a) => a.as_slice(),
            Storage::Csr(c) => c.values(),
        };
        dot_unchecked(values, values).sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `Ax`. Rows are summed left to right, so dense and CSR storage of the
    /// same matrix give bitwise-identical results.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.matvec_with(x, Execution::Auto)
    }

    pub fn matvec_with(&self, x: &[f64], exec: Execution) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.n];
        self.matvec_into(x, &mut out, exec)?;
        Ok(out)
    }

    pub fn matvec_into(&self, x: &[f64], out: &mut [f64], exec: Execution) -> Result<()> {
        check_len(self.n, x.len())?;
        check_len(self.n, out.len())?;
        let n = self.n;
        match &self.storage {
            Storage::Dense(a) => par::fill_indexed(exec, out, |i| dot_unchecked(&a[i * n..(i + 1) * n], x)),
            Storage::Csr(c) => par::fill_indexed(exec, out, |i| c.row_dot(i, x)),
        }
        Ok(())
    }

    /// `c·A`, same storage.
    pub fn scaled(&self, c: f64) -> SymMatrix {
        let storage = match &self.storage {
            Storage::Dense(a) => Storage::Dense(a.iter().map(|v| c * v).collect()),
            Storage::Csr(m) => {
                let mut m = m.clone();
                m.values.iter_mut().for_each(|v| *v *= c);
                Storage::Csr(m)
            }
        };
        SymMatrix { n: self.n, storage }
    }
}
