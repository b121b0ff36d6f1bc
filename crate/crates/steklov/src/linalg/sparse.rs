//! Sparse symmetric matrices stored as the lower triangle in CSR form.

use crate::error::{Error, Result};

/// Accumulates matrix entries in triplet form. Entries may be added in any
/// order and either triangle; duplicates are summed by [`Self::build`].
#[derive(Debug, Clone)]
pub struct SparseSymBuilder {
    n: usize,
    triplets: Vec<(usize, usize, f64)>,
}

impl SparseSymBuilder {
    pub fn new(n: usize) -> Self {
        SparseSymBuilder {
            n,
            triplets: Vec::new(),
        }
    }

    /// Adds `value` to entry (i, j). The symmetric counterpart is implied;
    /// adding both (i, j) and (j, i) would double the coefficient.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        debug_assert!(i < self.n && j < self.n);
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        self.triplets.push((hi, lo, value));
    }

    pub fn build(mut self) -> Result<SparseSym> {
        for &(i, j, v) in &self.triplets {
            if i >= self.n || j >= self.n {
                return Err(Error::DimensionMismatch(format!(
                    "triplet ({i}, {j}) outside a {0} x {0} matrix",
                    self.n
                )));
            }
            if !v.is_finite() {
                return Err(Error::Numerical(format!(
                    "non-finite coefficient at ({i}, {j})"
                )));
            }
        }
        self.triplets.sort_unstable_by_key(|&(i, j, _)| (i, j));

        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(self.triplets.len());
        for (i, j, v) in self.triplets {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }

        let mut row_ptr = vec![0usize; self.n + 1];
        for &(i, _, _) in &merged {
            row_ptr[i + 1] += 1;
        }
        for i in 0..self.n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx = merged.iter().map(|&(_, j, _)| j).collect();
        let values = merged.into_iter().map(|(_, _, v)| v).collect();
        Ok(SparseSym {
            n: self.n,
            row_ptr,
            col_idx,
            values,
        })
    }
}

/// Symmetric sparse matrix; only entries with row >= column are stored.
#[derive(Debug, Clone)]
pub struct SparseSym {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSym {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz_lower(&self) -> usize {
        self.values.len()
    }

    /// Iterates the stored lower-triangle entries as (row, col, value).
    pub fn iter_lower(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1])
                .map(move |k| (i, self.col_idx[k], self.values[k]))
        })
    }

    /// y = A x, expanding the symmetric part.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "matvec dimension mismatch");
        let mut y = vec![0.0; self.n];
        for (i, j, v) in self.iter_lower() {
            y[i] += v * x[j];
            if i != j {
                y[j] += v * x[i];
            }
        }
        y
    }

    /// Undirected adjacency lists of the sparsity pattern, diagonal dropped,
    /// neighbor lists sorted. Used by the fill-reducing ordering.
    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, j, _) in self.iter_lower() {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn builder_merges_duplicates() {
        let mut b = SparseSymBuilder::new(3);
        b.add(0, 0, 1.0);
        b.add(2, 1, 0.25);
        b.add(1, 2, 0.75); // same entry via the other triangle
        b.add(1, 1, 2.0);
        b.add(2, 2, 3.0);
        let a = b.build().unwrap();
        assert_eq!(a.nnz_lower(), 4);
        let y = a.matvec(&[1.0, 1.0, 1.0]);
        assert_relative_eq!(y[0], 1.0);
        assert_relative_eq!(y[1], 3.0);
        assert_relative_eq!(y[2], 4.0);
    }

    #[test]
    fn builder_rejects_bad_input() {
        let mut b = SparseSymBuilder::new(2);
        b.add(0, 0, f64::NAN);
        assert!(b.build().is_err());
    }

    #[test]
    fn adjacency_is_symmetric_and_sorted() {
        let mut b = SparseSymBuilder::new(4);
        b.add(0, 0, 1.0);
        b.add(3, 0, 1.0);
        b.add(2, 1, 1.0);
        b.add(3, 2, 1.0);
        let a = b.build().unwrap();
        let adj = a.adjacency();
        assert_eq!(adj[0], vec![3]);
        assert_eq!(adj[1], vec![2]);
        assert_eq!(adj[2], vec![1, 3]);
        assert_eq!(adj[3], vec![0, 2]);
    }
}
