// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Data-parallel cell mapping. Grid points and scan cells are independent
//! tasks; results are collected in index order so the output is identical
//! whatever the parallelism degree.

#[cfg(feature = "parallel")]
pub(crate) fn map_cells<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_cells<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
