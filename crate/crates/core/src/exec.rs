//! Data-parallel helpers with a sequential fallback.
//!
//! With the default `parallel` feature the per-group post-hoc tests and the
//! five pipelines fan out over rayon; without it the same code runs on plain
//! iterators. Results are collected in input order either way, so aggregation
//! is bit-identical across both modes.

use crate::error::Result;

#[cfg(feature = "parallel")]
pub(crate) fn map<I, T, F>(items: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<I, T, F>(items: Vec<I>, f: F) -> Vec<T>
where
    F: Fn(I) -> T,
{
    items.into_iter().map(f).collect()
}

/// Fallible map; the first error in input order wins.
pub(crate) fn try_map<I, T, F>(items: Vec<I>, f: F) -> Result<Vec<T>>
where
    I: Send,
    T: Send,
    F: Fn(I) -> Result<T> + Sync + Send,
{
    map(items, f).into_iter().collect()
}
