//! Execution policy for the data-parallel loops (subset enumeration, oracle
//! sweeps, seeded audit batches).
//!
//! With the `parallel` feature the loops run on rayon; without it, or when a
//! caller asks for [`Exec::Sequential`], they run on the current thread. Both
//! paths produce identical results: reductions are order-independent or
//! resolved by index.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// `Parallel` when the feature is compiled in, `Sequential` otherwise.
    pub fn effective(self) -> Exec {
        if cfg!(feature = "parallel") {
            self
        } else {
            Exec::Sequential
        }
    }
}

/// Map `f` over `0..n` and collect in index order.
pub fn map_range<R, F>(exec: Exec, n: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    match exec.effective() {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Smallest index in `0..n` for which `f` returns `Some`, together with the value.
pub fn find_first<R, F>(exec: Exec, n: u64, f: F) -> Option<(u64, R)>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    match exec.effective() {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n)
                .into_par_iter()
                .filter_map(|i| f(i).map(|r| (i, r)))
                .min_by_key(|(i, _)| *i)
        }
        _ => (0..n).find_map(|i| f(i).map(|r| (i, r))),
    }
}

/// Minimum of `f` over `0..n` (ties resolved toward the smaller index).
pub fn min_by_key<K, F>(exec: Exec, n: u64, f: F) -> Option<(u64, K)>
where
    K: Ord + Send,
    F: Fn(u64) -> Option<K> + Sync + Send,
{
    match exec.effective() {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n)
                .into_par_iter()
                .filter_map(|i| f(i).map(|k| (k, i)))
                .min()
                .map(|(k, i)| (i, k))
        }
        _ => (0..n)
            .filter_map(|i| f(i).map(|k| (k, i)))
            .min()
            .map(|(k, i)| (i, k)),
    }
}

/// Map `f` over a slice, preserving order.
pub fn map_slice<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec.effective() {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}
