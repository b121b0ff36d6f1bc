//! Dense Schur complement of a sparse symmetric matrix onto a marked index
//! set: S = A_bb - A_bi A_ii^{-1} A_ib.
//!
//! One interior factorization is shared by all boundary columns; each column
//! costs a solve plus sparse dot products. Columns are independent, so they
//! run on the rayon pool when the `parallel` feature is active, with the
//! sequential twin kept for benchmarking. Either path performs identical
//! arithmetic per column, so the results agree bitwise.

use crate::error::{Error, Result};
use crate::linalg::cholesky::SparseCholesky;
use crate::linalg::dense::DenseSym;
use crate::linalg::sparse::{SparseSym, SparseSymBuilder};
use crate::par;

/// Schur complement matrix together with the original indices it acts on.
#[derive(Debug, Clone)]
pub struct SchurResult {
    /// Dense condensed matrix, indexed like `boundary`.
    pub matrix: DenseSym,
    /// Original indices of the marked set, in increasing order.
    pub boundary: Vec<usize>,
}

struct Parts {
    boundary: Vec<usize>,
    a_bb: DenseSym,
    /// For each boundary column g: the interior-row entries of A e_g.
    cols_ib: Vec<Vec<(usize, f64)>>,
    chol_ii: SparseCholesky,
    n_interior: usize,
}

fn split(a: &SparseSym, is_boundary: &[bool]) -> Result<Parts> {
    let n = a.n();
    if is_boundary.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "boundary mask has length {}, matrix is {n} x {n}",
            is_boundary.len()
        )));
    }
    let boundary: Vec<usize> = (0..n).filter(|&i| is_boundary[i]).collect();
    let interior: Vec<usize> = (0..n).filter(|&i| !is_boundary[i]).collect();
    let mut to_local = vec![usize::MAX; n];
    for (k, &i) in boundary.iter().enumerate() {
        to_local[i] = k;
    }
    for (k, &i) in interior.iter().enumerate() {
        to_local[i] = k;
    }

    let nb = boundary.len();
    let ni = interior.len();
    let mut a_bb = DenseSym::zeros(nb);
    let mut builder_ii = SparseSymBuilder::new(ni);
    let mut cols_ib = vec![Vec::new(); nb];
    for (i, j, v) in a.iter_lower() {
        match (is_boundary[i], is_boundary[j]) {
            (true, true) => a_bb.add(to_local[i], to_local[j], v),
            (false, false) => builder_ii.add(to_local[i], to_local[j], v),
            (true, false) => cols_ib[to_local[i]].push((to_local[j], v)),
            (false, true) => cols_ib[to_local[j]].push((to_local[i], v)),
        }
    }
    let a_ii = builder_ii.build()?;
    let chol_ii = SparseCholesky::factor(&a_ii)?;
    Ok(Parts {
        boundary,
        a_bb,
        cols_ib,
        chol_ii,
        n_interior: ni,
    })
}

/// Computes the lower column pieces S[g..nb, g] for one boundary column.
fn schur_column(parts: &Parts, g: usize) -> Vec<f64> {
    let nb = parts.cols_ib.len();
    let mut rhs = vec![0.0; parts.n_interior];
    for &(i, v) in &parts.cols_ib[g] {
        rhs[i] = v;
    }
    let x = parts.chol_ii.solve(&rhs);
    (g..nb)
        .map(|h| {
            let mut s = parts.a_bb.get(h, g);
            for &(i, v) in &parts.cols_ib[h] {
                s -= v * x[i];
            }
            s
        })
        .collect()
}

fn assemble(parts: Parts, cols: Vec<Vec<f64>>) -> SchurResult {
    let nb = parts.boundary.len();
    let mut matrix = DenseSym::zeros(nb);
    for (g, col) in cols.into_iter().enumerate() {
        for (offset, v) in col.into_iter().enumerate() {
            matrix.set(g + offset, g, v);
        }
    }
    SchurResult {
        matrix,
        boundary: parts.boundary,
    }
}

/// Schur complement onto the marked indices; columns run in parallel when
/// the `parallel` feature is enabled.
pub fn schur_complement(a: &SparseSym, is_boundary: &[bool]) -> Result<SchurResult> {
    let parts = split(a, is_boundary)?;
    let gs: Vec<usize> = (0..parts.boundary.len()).collect();
    let cols = par::map_collect(&gs, |&g| schur_column(&parts, g));
    Ok(assemble(parts, cols))
}

/// Always-sequential twin of [`schur_complement`]; same arithmetic, same
/// result, kept so benchmarks can compare execution modes.
pub fn schur_complement_seq(a: &SparseSym, is_boundary: &[bool]) -> Result<SchurResult> {
    let parts = split(a, is_boundary)?;
    let gs: Vec<usize> = (0..parts.boundary.len()).collect();
    let cols = par::map_collect_seq(&gs, |&g| schur_column(&parts, g));
    Ok(assemble(parts, cols))
}
