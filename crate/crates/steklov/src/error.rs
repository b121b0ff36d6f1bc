//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by any of the toolkit's modules.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter failed its documented precondition. `name` matches the
    /// CLI flag spelling (without dashes) wherever one exists.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    /// Cholesky factorization hit a nonpositive pivot. The index is 0-based.
    #[error("matrix is not positive definite: pivot {index} is not positive")]
    NotPositiveDefinite { index: usize },

    /// An iterative solver ran out of its iteration budget.
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    /// Matrix or vector dimensions do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A numerical identity that must hold for valid inputs failed,
    /// signalling corrupted intermediate data.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Mesh generation could not complete.
    #[error("meshing failed: {0}")]
    Meshing(String),

    /// A mesh violates a structural invariant.
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    /// A text format (mesh or profile) failed to parse. Lines are 1-based.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// A boundary group name was requested that the mesh does not carry.
    #[error("unknown boundary group `{0}` (groups are attached by mesh generation and are not serialized)")]
    UnknownGroup(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Convenience constructor for precondition failures.
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            name,
            reason: reason.into(),
        }
    }
}
