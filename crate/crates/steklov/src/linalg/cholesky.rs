//! Sparse Cholesky factorization with reverse Cuthill-McKee preordering and
//! skyline (profile) storage.
//!
//! Profile factorization fills only inside the envelope of the reordered
//! matrix, so a bandwidth-reducing permutation is applied first: reverse
//! Cuthill-McKee seeded from a pseudo-peripheral vertex found by repeated
//! breadth-first searches.

use crate::error::{Error, Result};
use crate::linalg::sparse::SparseSym;

/// Lower-triangular factor of P A P^T = L L^T with P the RCM permutation.
#[derive(Debug, Clone)]
pub struct SparseCholesky {
    n: usize,
    /// perm[k] = original index placed at permuted position k.
    perm: Vec<usize>,
    /// first stored column of each skyline row.
    row_start: Vec<usize>,
    /// offset of row i's data; row i covers columns row_start[i]..=i.
    ptr: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseCholesky {
    /// Factors a symmetric positive definite matrix. Fails with the original
    /// (unpermuted) row index of the first non-positive pivot.
    pub fn factor(a: &SparseSym) -> Result<Self> {
        let n = a.n();
        let adj = a.adjacency();
        let perm = rcm_order(n, &adj);
        let mut iperm = vec![0usize; n];
        for (k, &orig) in perm.iter().enumerate() {
            iperm[orig] = k;
        }

        // skyline extent per permuted row
        let mut row_start: Vec<usize> = (0..n).collect();
        for (oi, oj, _) in a.iter_lower() {
            if oi == oj {
                continue;
            }
            let (hi, lo) = order_pair(iperm[oi], iperm[oj]);
            if lo < row_start[hi] {
                row_start[hi] = lo;
            }
        }
        let mut ptr = vec![0usize; n + 1];
        for i in 0..n {
            ptr[i + 1] = ptr[i] + (i - row_start[i] + 1);
        }
        let mut vals = vec![0.0; ptr[n]];
        for (oi, oj, v) in a.iter_lower() {
            let (hi, lo) = order_pair(iperm[oi], iperm[oj]);
            vals[ptr[hi] + (lo - row_start[hi])] += v;
        }

        // in-place profile factorization
        for i in 0..n {
            let fi = row_start[i];
            for j in fi..i {
                let fj = row_start[j];
                let lo = fi.max(fj);
                let mut s = vals[ptr[i] + (j - fi)];
                for k in lo..j {
                    s -= vals[ptr[i] + (k - fi)] * vals[ptr[j] + (k - fj)];
                }
                let djj = vals[ptr[j] + (j - fj)];
                vals[ptr[i] + (j - fi)] = s / djj;
            }
            let mut d = vals[ptr[i] + (i - fi)];
            for k in fi..i {
                let lik = vals[ptr[i] + (k - fi)];
                d -= lik * lik;
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite { index: perm[i] });
            }
            vals[ptr[i] + (i - fi)] = d.sqrt();
        }

        Ok(SparseCholesky {
            n,
            perm,
            row_start,
            ptr,
            vals,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored factor entries (the envelope size).
    pub fn profile_len(&self) -> usize {
        self.vals.len()
    }

    /// Solves A x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "solve dimension mismatch");
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            y[i] = b[self.perm[i]];
        }
        // forward: L y' = P b
        for i in 0..self.n {
            let fi = self.row_start[i];
            let mut s = y[i];
            for k in fi..i {
                s -= self.vals[self.ptr[i] + (k - fi)] * y[k];
            }
            y[i] = s / self.vals[self.ptr[i] + (i - fi)];
        }
        // backward: L^T z = y', sweeping columns
        for i in (0..self.n).rev() {
            let fi = self.row_start[i];
            y[i] /= self.vals[self.ptr[i] + (i - fi)];
            let xi = y[i];
            for k in fi..i {
                y[k] -= self.vals[self.ptr[i] + (k - fi)] * xi;
            }
        }
        let mut x = vec![0.0; self.n];
        for i in 0..self.n {
            x[self.perm[i]] = y[i];
        }
        x
    }
}

fn order_pair(a: usize, b: usize) -> (usize, usize) {
    if a >= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Reverse Cuthill-McKee ordering. Returns perm with perm[k] = original
/// index at position k. Handles disconnected graphs component by component.
pub(crate) fn rcm_order(n: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    let mut queue = std::collections::VecDeque::new();

    while order.len() < n {
        let start = (0..n)
            .filter(|&v| !visited[v])
            .min_by_key(|&v| (adj[v].len(), v))
            .expect("unvisited vertex exists");
        let root = pseudo_peripheral(start, adj);

        // Cuthill-McKee breadth-first sweep, neighbors by increasing degree
        let first = order.len();
        visited[root] = true;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_unstable_by_key(|&w| (adj[w].len(), w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
        order[first..].reverse();
    }
    order
}

/// Finds a vertex of nearly maximal eccentricity in `start`'s component by
/// alternating breadth-first searches until the eccentricity stops growing.
fn pseudo_peripheral(start: usize, adj: &[Vec<usize>]) -> usize {
    let mut root = start;
    let mut ecc = 0usize;
    loop {
        let (far, far_ecc) = bfs_farthest(root, adj);
        if far_ecc > ecc {
            ecc = far_ecc;
            root = far;
        } else {
            return root;
        }
    }
}

/// Returns a minimum-degree vertex in the last BFS level and the level depth.
fn bfs_farthest(root: usize, adj: &[Vec<usize>]) -> (usize, usize) {
    let n = adj.len();
    let mut depth = vec![usize::MAX; n];
    depth[root] = 0;
    let mut frontier = vec![root];
    let mut last = vec![root];
    let mut level = 0;
    while !frontier.is_empty() {
        last = frontier.clone();
        let mut next = Vec::new();
        for &v in &frontier {
            for &w in &adj[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    next.push(w);
                }
            }
        }
        if !next.is_empty() {
            level += 1;
        }
        frontier = next;
    }
    let far = last
        .iter()
        .copied()
        .min_by_key(|&v| (adj[v].len(), v))
        .unwrap_or(root);
    (far, level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sparse::SparseSymBuilder;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poisson_1d(n: usize) -> SparseSym {
        let mut b = SparseSymBuilder::new(n);
        for i in 0..n {
            b.add(i, i, 2.0);
            if i + 1 < n {
                b.add(i + 1, i, -1.0);
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn solves_tridiagonal_system() {
        let n = 50;
        let a = poisson_1d(n);
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let b = a.matvec(&x_true);
        let chol = SparseCholesky::factor(&a).unwrap();
        let x = chol.solve(&b);
        for i in 0..n {
            assert_relative_eq!(x[i], x_true[i], epsilon = 1e-10, max_relative = 1e-10);
        }
    }

    #[test]
    fn reports_first_bad_pivot() {
        // [[1, 2], [2, 1]] fails at the second pivot: 1 - (2/1)^2 < 0
        let mut b = SparseSymBuilder::new(2);
        b.add(0, 0, 1.0);
        b.add(1, 0, 2.0);
        b.add(1, 1, 1.0);
        let a = b.build().unwrap();
        match SparseCholesky::factor(&a) {
            Err(Error::NotPositiveDefinite { index }) => assert_eq!(index, 1),
            other => panic!("expected pivot failure, got {other:?}"),
        }
    }

    #[test]
    fn rcm_recovers_banded_structure() {
        // a path graph with shuffled labels must get a small envelope back
        let n = 400;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut labels: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            labels.swap(i, j);
        }
        let mut b = SparseSymBuilder::new(n);
        for i in 0..n {
            b.add(labels[i], labels[i], 2.0 + i as f64 * 1e-3);
            if i + 1 < n {
                b.add(labels[i], labels[i + 1], -1.0);
            }
        }
        let a = b.build().unwrap();
        let chol = SparseCholesky::factor(&a).unwrap();
        // a path relabeled by RCM is within bandwidth 2 of optimal
        assert!(
            chol.profile_len() <= 3 * n,
            "profile {} too large",
            chol.profile_len()
        );

        let x_true: Vec<f64> = (0..n).map(|i| ((i * 7 % 13) as f64) - 6.0).collect();
        let rhs = a.matvec(&x_true);
        let x = chol.solve(&rhs);
        for i in 0..n {
            assert_relative_eq!(x[i], x_true[i], epsilon = 1e-8, max_relative = 1e-8);
        }
    }

    #[test]
    fn random_spd_systems_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..25 {
            let n = rng.gen_range(2..30);
            // A = B B^T + I is symmetric positive definite
            let bmat: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let mut builder = SparseSymBuilder::new(n);
            for i in 0..n {
                for j in 0..=i {
                    let mut v = if i == j { 1.0 } else { 0.0 };
                    for k in 0..n {
                        v += bmat[i][k] * bmat[j][k];
                    }
                    builder.add(i, j, v);
                }
            }
            let a = builder.build().unwrap();
            let x_true: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let rhs = a.matvec(&x_true);
            let chol = SparseCholesky::factor(&a).unwrap();
            let x = chol.solve(&rhs);
            let norm: f64 = x_true.iter().map(|v| v * v).sum::<f64>().sqrt();
            let err: f64 = x
                .iter()
                .zip(&x_true)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-8 * (1.0 + norm), "trial {trial}: error {err}");
        }
    }

    #[test]
    fn empty_and_single_matrices() {
        let a = SparseSymBuilder::new(0).build().unwrap();
        let chol = SparseCholesky::factor(&a).unwrap();
        assert!(chol.solve(&[]).is_empty());

        let mut b = SparseSymBuilder::new(1);
        b.add(0, 0, 4.0);
        let a = b.build().unwrap();
        let chol = SparseCholesky::factor(&a).unwrap();
        assert_relative_eq!(chol.solve(&[2.0])[0], 0.5);
    }
}
