//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the helpers dispatch to rayon
//! unless the process-wide mode has been switched to [`Mode::Sequential`].
//! Without the feature every helper is a plain iterator loop. Reductions
//! always combine fixed-size chunks in index order, so floating-point results
//! are bitwise identical in both modes and for any thread count.

use std::sync::atomic::{AtomicU8, Ordering};

/// Chunk length used by the ordered reductions.
pub const REDUCE_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

static MODE: AtomicU8 = AtomicU8::new(1);

pub fn set_mode(mode: Mode) {
    MODE.store(mode as u8, Ordering::Relaxed);
}

pub fn mode() -> Mode {
    if cfg!(feature = "parallel") && MODE.load(Ordering::Relaxed) == Mode::Parallel as u8 {
        Mode::Parallel
    } else {
        Mode::Sequential
    }
}

/// Runs `f` with the given mode and restores the previous one afterwards.
pub fn with_mode<R>(m: Mode, f: impl FnOnce() -> R) -> R {
    let prev = mode();
    set_mode(m);
    let out = f();
    set_mode(prev);
    out
}

/// Uses `n` worker threads for the process; `n = 1` selects sequential mode.
/// The thread count can only be set before the first parallel call.
pub fn set_jobs(n: usize) {
    if n <= 1 {
        set_mode(Mode::Sequential);
        return;
    }
    set_mode(Mode::Parallel);
    #[cfg(feature = "parallel")]
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}

/// `(0..n).map(f).collect()`, possibly in parallel; order is preserved.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode() == Mode::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// `items.iter().map(f).collect()`, possibly in parallel; order is preserved.
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode() == Mode::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Fills `out[i] = f(i)`.
pub fn fill<R, F>(out: &mut [R], f: F)
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode() == Mode::Parallel {
        use rayon::prelude::*;
        out.par_iter_mut().enumerate().for_each(|(i, o)| *o = f(i));
        return;
    }
    for (i, o) in out.iter_mut().enumerate() {
        *o = f(i);
    }
}

/// Ordered chunked sum of `f(i)` for `i in 0..n`.
pub fn sum_range<T, F>(n: usize, zero: T, f: F) -> T
where
    T: Send + Sync + Copy + std::ops::Add<Output = T>,
    F: Fn(usize) -> T + Sync + Send,
{
    let chunks = n.div_ceil(REDUCE_CHUNK);
    let partial = map_range(chunks, |c| {
        let lo = c * REDUCE_CHUNK;
        let hi = (lo + REDUCE_CHUNK).min(n);
        (lo..hi).fold(zero, |acc, i| acc + f(i))
    });
    partial.into_iter().fold(zero, |acc, x| acc + x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_sum_matches_across_modes() {
        let f = |i: usize| 1.0 / (1.0 + i as f64).powf(1.3);
        let a = with_mode(Mode::Sequential, || sum_range(50_000, 0.0, f));
        let b = with_mode(Mode::Parallel, || sum_range(50_000, 0.0, f));
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn map_preserves_order() {
        let v = map_range(1000, |i| i * 3);
        assert!(v.iter().enumerate().all(|(i, &x)| x == 3 * i));
    }
}
