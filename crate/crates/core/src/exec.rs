use std::cmp::Ordering;

/// Execution strategy for the data-parallel loops in this crate.
///
/// `Parallel` uses rayon when the `parallel` feature is enabled and silently
/// degrades to `Sequential` otherwise. Results never depend on the choice:
/// maps preserve input order and reductions use a total order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
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
    pub(crate) fn map_range<R, F>(self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
            _ => (0..len).map(f).collect(),
        }
    }

    pub(crate) fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.map_range(items.len(), |i| f(&items[i]))
    }

    /// Minimum of `f` over `0..len` under `cmp`, which must be a total order
    /// for the result to be schedule independent.
    pub(crate) fn min_range<R, F, C>(self, len: usize, f: F, cmp: C) -> Option<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
        C: Fn(&R, &R) -> Ordering + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).min_by(|a, b| cmp(a, b))
            }
            _ => (0..len).map(f).min_by(|a, b| cmp(a, b)),
        }
    }
}
