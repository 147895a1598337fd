//! Thin switch between rayon and sequential iteration.

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, F>(len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}

/// Maximum of `f(i)` over `0..len`, `0.0` for an empty range.
pub(crate) fn max_f64<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    map_collect(len, f).into_iter().fold(0.0, nan_max)
}

/// `f64::max` that lets NaN win, so a broken residual never reads as a pass.
pub(crate) fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}
