//! Degree-of-parallelism configuration for slice-wise work.
//!
//! Every parallel map in this crate writes its results into a vector indexed
//! by slice and reduces sequentially afterwards, so outputs do not depend on
//! the number of threads.

use crate::error::{Error, Result};

/// Environment variable that overrides the default thread count.
pub const THREADS_ENV: &str = "TALGEBRA_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Parallelism(usize);

impl Parallelism {
    pub fn new(threads: usize) -> Result<Self> {
        if threads == 0 {
            return Err(Error::invalid("parallelism must be at least 1"));
        }
        Ok(Parallelism(threads))
    }

    pub fn sequential() -> Self {
        Parallelism(1)
    }

    /// Resolves the thread count: an explicit value wins, then
    /// `TALGEBRA_THREADS`, then the number of available cores.
    pub fn resolve(explicit: Option<usize>) -> Result<Self> {
        if let Some(n) = explicit {
            return Self::new(n);
        }
        if let Ok(value) = std::env::var(THREADS_ENV) {
            let n = value.trim().parse::<usize>().map_err(|_| {
                Error::invalid(format!("{THREADS_ENV}=`{value}` is not a positive integer"))
            })?;
            return Self::new(n);
        }
        let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
        Ok(Parallelism(cores))
    }

    pub fn threads(self) -> usize {
        self.0
    }

    /// Evaluates `f(0..count)` and returns the results in index order.
    pub fn map<T, F>(self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        if self.0 == 1 || count <= 1 {
            return (0..count).map(f).collect();
        }
        use rayon::prelude::*;
        match rayon::ThreadPoolBuilder::new().num_threads(self.0).build() {
            Ok(pool) => pool.install(|| (0..count).into_par_iter().map(&f).collect()),
            Err(_) => (0..count).map(f).collect(),
        }
    }

    /// Fallible variant of [`Parallelism::map`]; the first error in index order wins.
    pub fn try_map<T, F>(self, count: usize, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize) -> Result<T> + Sync + Send,
    {
        self.map(count, f).into_iter().collect()
    }
}

impl Default for Parallelism {
    fn default() -> Self {
        Parallelism(1)
    }
}
