//! Self-contained linear algebra for the finite element solver.
//!
//! The solver needs four operations: assembling sparse symmetric matrices,
//! factoring a symmetric positive definite sparse matrix, forming the dense
//! Schur complement of a sparse matrix onto a small index set, and solving
//! dense symmetric (plain and generalized) eigenproblems. Everything here is
//! deterministic: the parallel Schur complement distributes independent
//! columns whose arithmetic does not depend on the schedule, so results are
//! bitwise identical with and without the `parallel` feature.

mod cholesky;
mod dense;
mod eigen;
mod schur;
mod sparse;

pub use cholesky::SparseCholesky;
pub use dense::{DenseCholesky, DenseSym};
pub use eigen::{eig_sym, eig_sym_generalized, EigenDecomposition};
pub use schur::{schur_complement, schur_complement_seq, SchurResult};
pub use sparse::{SparseSym, SparseSymBuilder};
