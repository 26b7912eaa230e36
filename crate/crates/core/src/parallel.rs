//! Trial scheduling.
//!
//! Monte Carlo loops map a pure function over trial indices and collect the
//! results in index order. With the `parallel` feature the map runs on the
//! rayon pool; without it, [`Execution::Parallel`] quietly degrades to the
//! sequential loop. Either way the output vector is identical.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when this build can actually run trials concurrently.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Evaluates `f(i)` for `i in 0..n`, returning results in index order.
    pub fn map_trials<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Like [`map_trials`](Self::map_trials) but short-circuits on the first error
    /// (lowest index wins in the sequential path).
    pub fn try_map_trials<T, E, F>(self, n: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }
}
