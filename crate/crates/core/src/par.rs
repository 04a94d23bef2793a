// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Index-parallel map with a sequential fallback.
//!
//! Results are always returned in index order, so any reduction done by the
//! caller is independent of the thread schedule.

#[cfg(feature = "parallel")]
pub(crate) fn map_indices<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indices<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    map_indices_sequential(count, f)
}

pub(crate) fn map_indices_sequential<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}
