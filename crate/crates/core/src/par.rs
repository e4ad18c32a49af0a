//! Data-parallel helpers for index-range loops.
//!
//! Every helper takes an [`Exec`] so callers (and the benches) can pick the
//! path per call. Without the `parallel` feature `Exec::Parallel` runs the
//! sequential path. Results never depend on the chosen path.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// `(0..n).map(f).collect()`, in index order.
pub fn map<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Map over a slice, preserving order.
pub fn map_slice<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// First (lowest index) `Some` produced by `f`.
pub fn find_first<R, F>(exec: Exec, n: usize, f: F) -> Option<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().find_map_first(f);
    }
    let _ = exec;
    (0..n).find_map(f)
}

/// Maximum of `f` over `0..n`, `0.0` when empty. NaN propagates as infinity.
pub fn max_f64<F>(exec: Exec, n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let g = |i| {
        let v = f(i);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(g).reduce(|| 0.0, f64::max);
    }
    let _ = exec;
    (0..n).map(g).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_agree() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(map(exec, 5, |i| i * i), vec![0, 1, 4, 9, 16]);
            assert_eq!(find_first(exec, 100, |i| (i % 7 == 6).then_some(i)), Some(6));
            assert_eq!(max_f64(exec, 10, |i| i as f64), 9.0);
            assert_eq!(max_f64(exec, 0, |i| i as f64), 0.0);
        }
    }
}
