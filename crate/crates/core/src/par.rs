//! Order-preserving batch map over rayon, with a sequential path that is
//! always available and is the only path without the `parallel` feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is on; sequential otherwise.
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

pub fn map<T, U, F>(items: &[T], exec: Execution, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Like [`map`], but reports the error of the earliest failing item.
pub fn try_map<T, U, F>(items: &[T], exec: Execution, f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    map(items, exec, f).into_iter().collect()
}
