//! Index-parallel map helpers.
//!
//! All bulk work in the crate (grid sampling, sphere scans, verification
//! trials) is expressed as a pure function of an index, so results are
//! identical whatever the thread schedule. With the `parallel` feature
//! (default) the work runs on the rayon pool; without it, sequentially.
//! [`map_indexed_seq`] is always sequential, for baseline measurements.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Applies `f` to `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_indexed_seq(n, f)
}

/// Sequential variant with the same contract, regardless of features.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    (0..n).map(f).collect()
}

/// Fold of `f(i)` into the maximum, `0.0` for `n == 0`. Used for residual
/// maxima over trial batches; max is order-insensitive so the parallel and
/// sequential paths agree bit for bit.
pub fn max_indexed<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    map_indexed(n, f).into_iter().fold(0.0f64, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_index_order() {
        let out = map_indexed(100, |i| i * i);
        let seq = map_indexed_seq(100, |i| i * i);
        assert_eq!(out, seq);
    }

    #[test]
    fn max_of_empty_is_zero() {
        assert_eq!(max_indexed(0, |_| 17.0), 0.0);
    }

    #[test]
    fn max_matches_iterator_fold() {
        let m = max_indexed(10, |i| (i as f64 - 4.5).abs());
        assert_eq!(m, 4.5);
    }
}
