//! Data-parallel map with a sequential fallback. With the `parallel` feature
//! the work is spread over the rayon pool; without it (or when the caller asks
//! for sequential execution) the same closure runs in order.

pub fn map_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_par<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_par<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_seq(items, f)
}

/// Dispatch on a runtime flag; `parallel = true` is a no-op request when the
/// crate is built without the `parallel` feature.
pub fn map<T, R, F>(items: &[T], parallel: bool, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if parallel {
        map_par(items, f)
    } else {
        map_seq(items, f)
    }
}

pub fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}
