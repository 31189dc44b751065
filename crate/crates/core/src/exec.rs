//! Dispatch for data-parallel inner loops.
//!
//! `map_indexed` fans the index range out over rayon when the `parallel`
//! feature is on, and iterates sequentially otherwise. Callers seed any
//! randomness per index, so the two paths produce identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Strategy selector, mainly for benchmarks that compare both paths
/// within one binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Rayon work-stealing when the `parallel` feature is enabled;
    /// silently sequential otherwise.
    #[default]
    Parallel,
}

pub fn map_indexed<T, F>(n: usize, exec: Exec, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Exec::Sequential => (0..n).map(f).collect(),
        Exec::Parallel => {
            #[cfg(feature = "parallel")]
            {
                (0..n).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..n).map(f).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let f = |i: usize| (i as f64).sqrt();
        let a = map_indexed(1000, Exec::Sequential, f);
        let b = map_indexed(1000, Exec::Parallel, f);
        assert_eq!(a, b);
    }
}
