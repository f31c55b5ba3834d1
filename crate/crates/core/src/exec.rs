//! Sequential and data-parallel execution of the numeric kernels.
//!
//! Every reduction is split into fixed-size chunks whose partial sums are
//! combined in chunk order, so results are bitwise identical for both modes
//! and for any thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Elements per reduction chunk. Part of the numerical contract: changing it
/// changes rounding.
pub const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    /// Falls back to [`Execution::Sequential`] when the `parallel` feature is off.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Apply `f` to every item, keeping input order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Run two independent closures, possibly concurrently.
    pub fn join<A, B, RA, RB>(self, a: A, b: B) -> (RA, RB)
    where
        A: FnOnce() -> RA + Send,
        B: FnOnce() -> RB + Send,
        RA: Send,
        RB: Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return rayon::join(a, b);
        }
        (a(), b())
    }

    /// Call `f(start_index, chunk)` on consecutive `chunk_len`-sized pieces.
    pub fn for_each_chunk_mut<T, F>(self, data: &mut [T], chunk_len: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            data.par_chunks_mut(chunk_len)
                .enumerate()
                .for_each(|(i, c)| f(i * chunk_len, c));
            return;
        }
        data.chunks_mut(chunk_len)
            .enumerate()
            .for_each(|(i, c)| f(i * chunk_len, c));
    }

    /// Deterministic chunked sum of `f(i)` for `i in 0..len`.
    pub fn sum<F>(self, len: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        let chunks = len.div_ceil(CHUNK);
        let partial = |c: usize| -> f64 {
            let end = ((c + 1) * CHUNK).min(len);
            (c * CHUNK..end).map(&f).sum()
        };
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            let partials: Vec<f64> = (0..chunks).into_par_iter().map(partial).collect();
            return partials.iter().sum();
        }
        let partials: Vec<f64> = (0..chunks).map(partial).collect();
        partials.iter().sum()
    }

    pub fn dot(self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        self.sum(a.len(), |i| a[i] * b[i])
    }

    pub fn norm(self, a: &[f64]) -> f64 {
        self.dot(a, a).sqrt()
    }

    /// `y += alpha * x`.
    pub fn axpy(self, alpha: f64, x: &[f64], y: &mut [f64]) {
        self.for_each_chunk_mut(y, CHUNK, |start, chunk| {
            for (k, yi) in chunk.iter_mut().enumerate() {
                *yi += alpha * x[start + k];
            }
        });
    }

    pub fn scale(self, alpha: f64, y: &mut [f64]) {
        self.for_each_chunk_mut(y, CHUNK, |_, chunk| {
            for yi in chunk {
                *yi *= alpha;
            }
        });
    }
}
