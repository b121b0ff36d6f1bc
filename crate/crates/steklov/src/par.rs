//! Data-parallel execution helpers.
//!
//! The crate's heavy loops (Schur-complement columns, Fourier-mode solves,
//! experiment grid points) are data-parallel with independent, deterministic
//! work items. When the `parallel` feature is enabled they run on the rayon
//! pool; otherwise they run sequentially. Each item's arithmetic order is
//! identical either way, so results are bitwise reproducible across both
//! execution modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, parallel when the feature allows, preserving order.
pub(crate) fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Always-sequential twin of [`map_collect`], kept so benchmarks can compare
/// the two execution modes inside one build.
pub(crate) fn map_collect_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Maps a fallible `f` over indices `0..len`, stopping on the first error.
pub(crate) fn try_map_indices<U, F>(len: usize, f: F) -> crate::error::Result<Vec<U>>
where
    U: Send,
    F: Fn(usize) -> crate::error::Result<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Always-sequential twin of [`try_map_indices`] for benchmark comparisons.
pub(crate) fn try_map_indices_seq<U, F>(len: usize, f: F) -> crate::error::Result<Vec<U>>
where
    F: Fn(usize) -> crate::error::Result<U>,
{
    (0..len).map(f).collect()
}
