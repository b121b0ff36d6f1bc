//! Dense symmetric eigensolvers based on the cyclic Jacobi rotation method.
//!
//! Jacobi iteration is slower than tridiagonalization but has excellent,
//! easily verified accuracy: every rotation is orthogonal to working
//! precision, so eigenvector residuals stay near machine epsilon. The
//! matrices handled here (Schur complements on boundary nodes, boundary mass
//! matrices) are small enough that robustness is worth more than speed.

use crate::error::{Error, Result};
use crate::linalg::dense::DenseSym;

/// Eigenvalues in ascending order, with `vectors[k]` the unit eigenvector
/// belonging to `values[k]`. For the generalized problem the vectors are
/// orthonormal in the mass inner product instead.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

const MAX_SWEEPS: usize = 100;

/// Solves A v = lambda v for dense symmetric A.
pub fn eig_sym(a: &DenseSym) -> Result<EigenDecomposition> {
    let n = a.n();
    let full = a.to_full();
    let (diag, vmat) = jacobi_full(n, full)?;
    Ok(sorted_decomposition(n, diag, vmat))
}

/// Solves A v = lambda M v for dense symmetric A and positive definite M,
/// by reducing to the standard problem with M = L L^T. Returned vectors
/// satisfy v_i^T M v_j = delta_ij.
pub fn eig_sym_generalized(a: &DenseSym, m: &DenseSym) -> Result<EigenDecomposition> {
    let n = a.n();
    if m.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "pencil dimensions disagree: {n} vs {}",
            m.n()
        )));
    }
    let lm = m.cholesky()?;

    // X = L^{-1} A, one forward solve per column of A
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| a.get(i, j)).collect())
        .collect();
    for col in &mut cols {
        lm.forward_solve(col);
    }
    // C = X L^{-T}; its transpose is L^{-1} X^T, one solve per row of X
    let mut rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| cols[j][i]).collect())
        .collect();
    for row in &mut rows {
        lm.forward_solve(row);
    }
    let mut c = DenseSym::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            c.set(i, j, 0.5 * (rows[i][j] + rows[j][i]));
        }
    }

    let mut dec = eig_sym(&c)?;
    for v in &mut dec.vectors {
        lm.back_solve(v); // v = L^{-T} w
    }
    Ok(dec)
}

/// Cyclic Jacobi on full row-major storage. Returns the final diagonal and
/// the accumulated rotation matrix V (column k is eigenvector k).
fn jacobi_full(n: usize, mut a: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n < 2 {
        let diag = (0..n).map(|i| a[i * n + i]).collect();
        return Ok((diag, v));
    }

    let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-12 * norm;
    let mut off = off_diagonal_norm(n, &a);
    if off <= tol {
        let diag = (0..n).map(|i| a[i * n + i]).collect();
        return Ok((diag, v));
    }

    for _sweep in 0..MAX_SWEEPS {
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (c, s, t) = rotation(a[p * n + p], a[q * n + q], apq);

                let app = a[p * n + p];
                let aqq = a[q * n + q];
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    let new_p = c * aip - s * aiq;
                    let new_q = s * aip + c * aiq;
                    a[i * n + p] = new_p;
                    a[p * n + i] = new_p;
                    a[i * n + q] = new_q;
                    a[q * n + i] = new_q;
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
        off = off_diagonal_norm(n, &a);
        if off <= tol {
            let diag = (0..n).map(|i| a[i * n + i]).collect();
            return Ok((diag, v));
        }
    }
    Err(Error::NoConvergence {
        sweeps: MAX_SWEEPS,
        off,
    })
}

/// Stable Jacobi rotation: returns (cos, sin, tan) annihilating a_pq.
fn rotation(app: f64, aqq: f64, apq: f64) -> (f64, f64, f64) {
    let tau = (aqq - app) / (2.0 * apq);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, t)
}

fn off_diagonal_norm(n: usize, a: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += 2.0 * a[i * n + j] * a[i * n + j];
        }
    }
    s.sqrt()
}

fn sorted_decomposition(n: usize, diag: Vec<f64>, vmat: Vec<f64>) -> EigenDecomposition {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&k| diag[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| vmat[i * n + k]).collect())
        .collect();
    EigenDecomposition { values, vectors }
}
