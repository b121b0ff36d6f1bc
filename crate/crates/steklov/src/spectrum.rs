//! Eigenvalue lists with multiplicities and provenance labels.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

/// Which root of the annulus quadratic an eigenvalue came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Low,
    High,
}

/// Where an eigenvalue came from: a closed-form angular block or a merged
/// cluster of discrete Fourier-mode eigenvalues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    /// Degree-k spherical harmonic block of the ball.
    Harmonic { k: u32 },
    /// Angular index and root branch of an annulus separation block.
    Angular { k: u32, branch: Branch },
    /// Fourier modes contributing to one merged discrete eigenvalue cluster.
    Fourier { modes: Vec<u32> },
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Harmonic { k } => write!(f, "k={k}"),
            Label::Angular { k, branch } => {
                let b = match branch {
                    Branch::Low => "low",
                    Branch::High => "high",
                };
                write!(f, "k={k}/{b}")
            }
            Label::Fourier { modes } => {
                write!(f, "m=")?;
                for (i, m) in modes.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{m}")?;
                }
                Ok(())
            }
        }
    }
}

/// One eigenvalue with its multiplicity and provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub value: f64,
    pub multiplicity: u32,
    pub label: Label,
}

/// A sorted eigenvalue list. Construction enforces the ordering and
/// multiplicity invariants, so holders can rely on them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    /// Wraps entries after checking they are finite, nondecreasing in value,
    /// and carry positive multiplicities.
    pub fn new(entries: Vec<SpectrumEntry>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if !e.value.is_finite() {
                return Err(Error::Numerical(format!(
                    "spectrum entry {i} has non-finite value"
                )));
            }
            if e.multiplicity == 0 {
                return Err(Error::Numerical(format!(
                    "spectrum entry {i} has zero multiplicity"
                )));
            }
            if i > 0 && e.value < entries[i - 1].value {
                return Err(Error::Numerical(format!(
                    "spectrum values decrease at entry {i}: {} after {}",
                    e.value,
                    entries[i - 1].value
                )));
            }
        }
        Ok(Spectrum { entries })
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// First entry whose value exceeds `tol`, i.e. the first eigenvalue that
    /// is not the constant mode's zero.
    pub fn first_nonzero(&self, tol: f64) -> Option<&SpectrumEntry> {
        self.entries.iter().find(|e| e.value > tol)
    }

    /// Number of entries above `tol`.
    pub fn nonzero_len(&self, tol: f64) -> usize {
        self.entries.iter().filter(|e| e.value > tol).count()
    }

    /// Eigenvalues repeated according to multiplicity, in order.
    pub fn expanded(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat(e.value).take(e.multiplicity as usize))
    }
}
