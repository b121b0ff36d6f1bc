//! Steklov eigenvalue toolkit.
//!
//! Computes Steklov spectra of Euclidean domains two ways and checks them
//! against each other:
//!
//! - [`exact`]: closed-form spectra of the unit ball and the spherical-shell
//!   annulus in any dimension n >= 3, small-eps asymptotics, boundary-volume
//!   normalization, and the explicit upper bound every normalized value is
//!   audited against.
//! - [`geometry`] + [`mesh`] + [`fem`]: axisymmetric domains in R^3
//!   (ball, annulus, annulus with an excised axis tube) described by meridian
//!   profiles, meshed with graded triangles, and solved by P1 finite elements
//!   one azimuthal Fourier mode at a time via the discrete
//!   Dirichlet-to-Neumann map.
//! - [`experiments`]: drivers that sweep these solvers over parameter grids,
//!   fit limits, and write deterministic CSV/JSON reports with explicit
//!   pass/fail verdicts.
//!
//! In-house dense/sparse symmetric linear algebra lives in [`linalg`].
//!
//! The `parallel` feature (default on) runs grid points, Fourier modes, and
//! Schur-complement columns on rayon; disabling it falls back to sequential
//! loops with bitwise-identical results.

pub mod error;
pub mod exact;
pub mod experiments;
pub mod fem;
pub mod geometry;
pub mod linalg;
pub mod mesh;
pub mod spectrum;

mod dd;
mod par;

pub use error::{Error, Result};
