//! Dense symmetric matrices in packed lower-triangle storage, with a dense
//! Cholesky factorization used by the generalized eigensolver.

use crate::error::{Error, Result};

/// Dense symmetric matrix; entry (i, j), j <= i, lives at i (i + 1) / 2 + j.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSym {
    n: usize,
    data: Vec<f64>,
}

impl DenseSym {
    pub fn zeros(n: usize) -> Self {
        DenseSym {
            n,
            data: vec![0.0; n * (n + 1) / 2],
        }
    }

    /// Builds from a full row-major square matrix, verifying symmetry.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
        }
        let mut m = DenseSym::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                if (rows[i][j] - rows[j][i]).abs() > 1e-12 * (1.0 + rows[i][j].abs()) {
                    return Err(Error::DimensionMismatch(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
                m.set(i, j, rows[i][j]);
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(i: usize, j: usize) -> usize {
        debug_assert!(j <= i);
        i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        self.data[Self::idx(hi, lo)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        self.data[Self::idx(hi, lo)] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        self.data[Self::idx(hi, lo)] += v;
    }

    /// Expands to full row-major storage.
    pub fn to_full(&self) -> Vec<f64> {
        let n = self.n;
        let mut full = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = self.data[Self::idx(i, j)];
                full[i * n + j] = v;
                full[j * n + i] = v;
            }
        }
        full
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "matvec dimension mismatch");
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                y[i] += self.get(i, j) * x[j];
            }
        }
        y
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let v = self.data[Self::idx(i, j)];
                s += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        s.sqrt()
    }

    /// Cholesky factorization A = L L^T. Fails with the row index of the
    /// first non-positive pivot.
    pub fn cholesky(&self) -> Result<DenseCholesky> {
        let n = self.n;
        let mut l = vec![0.0; n * (n + 1) / 2];
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.data[Self::idx(i, j)];
                for k in 0..j {
                    s -= l[Self::idx(i, k)] * l[Self::idx(j, k)];
                }
                if i == j {
                    if !(s > 0.0) {
                        return Err(Error::NotPositiveDefinite { index: i });
                    }
                    l[Self::idx(i, i)] = s.sqrt();
                } else {
                    l[Self::idx(i, j)] = s / l[Self::idx(j, j)];
                }
            }
        }
        Ok(DenseCholesky { n, l })
    }
}

/// Lower-triangular Cholesky factor in packed storage.
#[derive(Debug, Clone)]
pub struct DenseCholesky {
    n: usize,
    l: Vec<f64>,
}

impl DenseCholesky {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry L[i][j] (zero above the diagonal).
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if j > i {
            0.0
        } else {
            self.l[DenseSym::idx(i, j)]
        }
    }

    /// In-place forward substitution L x = b.
    pub fn forward_solve(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        for i in 0..self.n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l[DenseSym::idx(i, k)] * b[k];
            }
            b[i] = s / self.l[DenseSym::idx(i, i)];
        }
    }

    /// In-place backward substitution L^T x = b.
    pub fn back_solve(&self, b: &mut [f64]) {
        for i in (0..self.n).rev() {
            let mut s = b[i];
            for k in i + 1..self.n {
                s -= self.l[DenseSym::idx(k, i)] * b[k];
            }
            b[i] = s / self.l[DenseSym::idx(i, i)];
        }
    }

    /// Solves A x = b for A = L L^T.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.forward_solve(&mut x);
        self.back_solve(&mut x);
        x
    }
}
