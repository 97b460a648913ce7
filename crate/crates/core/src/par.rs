//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper returns the same value under both execution modes: searches
//! report the lowest satisfying index and reductions are order independent.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a data-parallel loop is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    /// Runs on the rayon pool when the `parallel` feature is enabled,
    /// sequentially otherwise.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Lowest index in `0..len` satisfying `pred`.
pub fn find_first<F>(exec: Execution, len: usize, pred: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().find_first(|&i| pred(i));
    }
    let _ = exec;
    (0..len).find(|&i| pred(i))
}

/// Lowest index in `0..len` for which `f` returns `Some`, with its value.
pub fn find_map_first<F, R>(exec: Execution, len: usize, f: F) -> Option<(usize, R)>
where
    F: Fn(usize) -> Option<R> + Sync + Send,
    R: Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().filter_map(|i| f(i).map(|r| (i, r))).min_by_key(|(i, _)| *i);
    }
    let _ = exec;
    (0..len).find_map(|i| f(i).map(|r| (i, r)))
}

/// `f` applied to every index in `0..len`, in index order.
pub fn map_range<F, R>(exec: Execution, len: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R + Sync + Send,
    R: Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// `f` applied to every item, in input order.
pub fn map_slice<T, F, R>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    F: Fn(&T) -> R + Sync + Send,
    R: Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Number of indices in `0..len` satisfying `pred`.
pub fn count<F>(exec: Execution, len: usize, pred: F) -> usize
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().filter(|&i| pred(i)).count();
    }
    let _ = exec;
    (0..len).filter(|&i| pred(i)).count()
}
