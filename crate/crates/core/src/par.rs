//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature enabled (the default) work is spread over the
//! rayon global pool. Without it every helper runs sequentially. Each output
//! element is computed by exactly one closure call, so results are identical
//! for any thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Row count below which `Execution::Auto` stays sequential.
pub const PARALLEL_THRESHOLD: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    Parallel,
    /// Parallel when the workload is at least [`PARALLEL_THRESHOLD`] items.
    #[default]
    Auto,
}

impl Execution {
    /// Whether a workload of `len` items runs on the pool.
    pub fn is_parallel(self, len: usize) -> bool {
        if !cfg!(feature = "parallel") {
            return false;
        }
        match self {
            Execution::Sequential => false,
            Execution::Parallel => true,
            Execution::Auto => len >= PARALLEL_THRESHOLD,
        }
    }
}

/// Fills `out[i] = f(i)`.
pub fn fill_indexed<F>(exec: Execution, out: &mut [f64], f: F)
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel(out.len()) {
        out.par_iter_mut().enumerate().for_each(|(i, o)| *o = f(i));
        return;
    }
    let _ = exec;
    for (i, o) in out.iter_mut().enumerate() {
        *o = f(i);
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel(items.len()) {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Maps `f` over `0..len`, preserving order.
pub fn map_range<R, F>(exec: Execution, len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel(len) {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_parallel_agree() {
        let items: Vec<f64> = (0..1000).map(|i| i as f64 * 0.37).collect();
        let seq = map(Execution::Sequential, &items, |x| x.sin());
        let par = map(Execution::Parallel, &items, |x| x.sin());
        assert_eq!(seq, par);

        let mut a = vec![0.0; 777];
        let mut b = vec![0.0; 777];
        fill_indexed(Execution::Sequential, &mut a, |i| (i as f64).sqrt());
        fill_indexed(Execution::Parallel, &mut b, |i| (i as f64).sqrt());
        assert_eq!(a, b);
    }

    #[test]
    fn auto_threshold() {
        assert!(!Execution::Auto.is_parallel(PARALLEL_THRESHOLD - 1));
        assert!(!Execution::Sequential.is_parallel(1 << 20));
        assert_eq!(
            Execution::Auto.is_parallel(PARALLEL_THRESHOLD),
            cfg!(feature = "parallel")
        );
    }
}
