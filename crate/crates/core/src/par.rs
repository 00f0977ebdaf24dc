//! Data-parallel primitives with a sequential fallback.
//!
//! With the `parallel` feature (default) these dispatch to rayon; without it
//! they are plain loops. Reductions always combine fixed-size chunks in index
//! order so results are bit-identical regardless of the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const REDUCE_CHUNK: usize = 4096;

/// Applies `f` to every consecutive chunk of `len` elements, passing the chunk index.
pub fn for_each_chunk_mut<T, F>(data: &mut [T], len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Send + Sync,
{
    #[cfg(feature = "parallel")]
    data.par_chunks_mut(len).enumerate().for_each(|(i, c)| f(i, c));
    #[cfg(not(feature = "parallel"))]
    data.chunks_mut(len).enumerate().for_each(|(i, c)| f(i, c));
}

/// Like [`for_each_chunk_mut`] with a per-worker scratch value built by `init`.
pub fn for_each_chunk_mut_init<T, S, I, F>(data: &mut [T], len: usize, init: I, f: F)
where
    T: Send,
    I: Fn() -> S + Send + Sync,
    F: Fn(&mut S, usize, &mut [T]) + Send + Sync,
{
    #[cfg(feature = "parallel")]
    data.par_chunks_mut(len)
        .enumerate()
        .for_each_init(&init, |s, (i, c)| f(s, i, c));
    #[cfg(not(feature = "parallel"))]
    {
        let mut s = init();
        data.chunks_mut(len)
            .enumerate()
            .for_each(|(i, c)| f(&mut s, i, c));
    }
}

/// Element-wise update `out[i] = f(i, out[i])`.
pub fn map_indexed<T, F>(data: &mut [T], f: F)
where
    T: Send + Copy,
    F: Fn(usize, T) -> T + Send + Sync,
{
    for_each_chunk_mut(data, REDUCE_CHUNK, |c, chunk| {
        let base = c * REDUCE_CHUNK;
        for (o, v) in chunk.iter_mut().enumerate() {
            *v = f(base + o, *v);
        }
    });
}

/// Deterministic sum of `f(i)` over `0..n`.
pub fn sum_indexed<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Send + Sync,
{
    let chunks = n.div_ceil(REDUCE_CHUNK);
    let partial = |c: usize| {
        let lo = c * REDUCE_CHUNK;
        let hi = (lo + REDUCE_CHUNK).min(n);
        (lo..hi).map(&f).sum::<f64>()
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<f64> = (0..chunks).into_par_iter().map(partial).collect();
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<f64> = (0..chunks).map(partial).collect();
    parts.into_iter().sum()
}

/// Maximum of `f(i)` over `0..n` (0 for empty ranges). NaN propagates.
pub fn max_indexed<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Send + Sync,
{
    let chunks = n.div_ceil(REDUCE_CHUNK);
    let partial = |c: usize| {
        let lo = c * REDUCE_CHUNK;
        let hi = (lo + REDUCE_CHUNK).min(n);
        (lo..hi).map(&f).fold(0.0_f64, nan_max)
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<f64> = (0..chunks).into_par_iter().map(partial).collect();
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<f64> = (0..chunks).map(partial).collect();
    parts.into_iter().fold(0.0, nan_max)
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Maps `f` over `items`, preserving order. Used to fan out independent runs.
pub fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    return items.par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    return items.iter().map(f).collect();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_matches_sequential() {
        let n = 10_007;
        let s = sum_indexed(n, |i| (i as f64).sqrt());
        let r: f64 = (0..n)
            .collect::<Vec<_>>()
            .chunks(REDUCE_CHUNK)
            .map(|c| c.iter().map(|&i| (i as f64).sqrt()).sum::<f64>())
            .sum();
        assert_eq!(s, r);
    }

    #[test]
    fn max_handles_nan_and_empty() {
        assert_eq!(max_indexed(0, |_| 1.0), 0.0);
        assert_eq!(max_indexed(5, |i| i as f64), 4.0);
        assert!(max_indexed(5, |i| if i == 3 { f64::NAN } else { 1.0 }).is_nan());
    }
}
