//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper takes an [`Exec`] so callers (and the benches) can pick the
//! path at run time. Without the `parallel` feature both variants run
//! sequentially. Results never depend on the execution mode: work is split
//! into index-ordered chunks and merged in index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Map `f` over `0..n`, keeping index order.
pub fn map_range<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}

/// Map `f` over the items of `items`, keeping order.
pub fn map_slice<S, T, F>(exec: Exec, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Process `0..n` in contiguous chunks, each producing a partial result;
/// partials come back in chunk order.
pub fn chunked<T, F>(exec: Exec, n: usize, chunk: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    let count = n.div_ceil(chunk);
    map_range(exec, count, |c| f(c * chunk..((c + 1) * chunk).min(n)))
}

/// Sum of `f(i)` over `0..n` for integer counts (order-independent).
pub fn count_range<F>(exec: Exec, n: usize, f: F) -> usize
where
    F: Fn(usize) -> bool + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..n).into_par_iter().filter(|&i| f(i)).count(),
        _ => (0..n).filter(|&i| f(i)).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let a = map_range(Exec::Sequential, 1000, |i| i * i);
        let b = map_range(Exec::Parallel, 1000, |i| i * i);
        assert_eq!(a, b);
        let c: Vec<usize> = chunked(Exec::Parallel, 1003, 100, |r| r.sum::<usize>());
        let d: Vec<usize> = chunked(Exec::Sequential, 1003, 100, |r| r.sum::<usize>());
        assert_eq!(c, d);
        assert_eq!(c.len(), 11);
        assert_eq!(count_range(Exec::Parallel, 100, |i| i % 3 == 0), 34);
    }
}
