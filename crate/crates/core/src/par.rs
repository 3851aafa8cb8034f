//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature, work is spread over the rayon pool;
//! without it, or in [`Parallelism::Sequential`] mode, items are processed in
//! order on the calling thread. Results keep input order either way.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parallelism {
    #[default]
    Parallel,
    Sequential,
}

impl Parallelism {
    /// `Parallel` only when the crate was built with rayon.
    pub fn available() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }
}

pub fn map<T, R, F>(mode: Parallelism, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == Parallelism::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Sizes the global pool. Has no effect without the `parallel` feature or
/// once the pool has been used.
pub fn set_threads(n: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let _ = n;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree_and_keep_order() {
        let xs: Vec<u64> = (0..500).collect();
        let a = map(Parallelism::Parallel, &xs, |x| x * x);
        let b = map(Parallelism::Sequential, &xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(a[499], 499 * 499);
    }
}
