//! Thin switch between data-parallel and sequential execution of the
//! library's inner loops.  The `parallel` feature selects the default; the
//! sequential path always exists so the two can be benchmarked against each
//! other.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a data-parallel loop should run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Uses the worker pool when the `parallel` feature is enabled, otherwise
    /// falls back to sequential execution.
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Maps `f` over `items` and concatenates the resulting vectors, preserving
/// input order.
pub fn flat_map_vec<T, U, F>(items: Vec<T>, f: F, mode: ExecMode) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Vec<U> + Sync + Send,
{
    match mode {
        ExecMode::Sequential => items.into_iter().flat_map(f).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                items.into_par_iter().flat_map_iter(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.into_iter().flat_map(f).collect()
            }
        }
    }
}

/// Maps `f` over `items`, preserving input order.
pub fn map_vec<T, U, F>(items: Vec<T>, f: F, mode: ExecMode) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    match mode {
        ExecMode::Sequential => items.into_iter().map(f).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                items.into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.into_iter().map(f).collect()
            }
        }
    }
}

/// Returns the minimum of `f` over `items` under the natural order of `U`,
/// skipping `None` results.  Used to pick the canonical-order-minimal witness
/// even when the scan itself runs out of order.
pub fn filter_min<T, U, F>(items: Vec<T>, f: F, mode: ExecMode) -> Option<U>
where
    T: Send,
    U: Ord + Send,
    F: Fn(T) -> Option<U> + Sync + Send,
{
    match mode {
        ExecMode::Sequential => items.into_iter().filter_map(f).min(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                items.into_par_iter().filter_map(f).min()
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.into_iter().filter_map(f).min()
            }
        }
    }
}
