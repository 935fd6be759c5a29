//! Data-parallel map over sample indices with a sequential fallback.
//!
//! Every sampling loop in the crate draws its randomness from a stream
//! derived from (seed, sample index), so the result of `map_indexed` does not
//! depend on scheduling. With the `parallel` feature the work is spread over
//! the rayon pool; without it the same closure runs on one thread.

#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// True when the crate was built with the rayon backend.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
