//! Execution strategy for the data-parallel inner loops.
//!
//! Every hot loop (RHS evaluation over nodes, per-node quadratures, radial
//! Fourier kernel sums) maps independent node indices to values. With the
//! `parallel` feature the map runs on the rayon pool; without it, or with
//! [`Execution::Sequential`], it runs in index order on the calling thread.
//! Results are always materialized in index order and reduced with a fixed
//! pairwise tree, so sums are bit-identical across thread counts.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Execution {
    #[cfg(feature = "parallel")]
    fn default() -> Self {
        Execution::Parallel
    }
    #[cfg(not(feature = "parallel"))]
    fn default() -> Self {
        Execution::Sequential
    }
}

/// Work is handed to rayon in chunks of this many indices; below twice
/// this size the dispatch overhead beats the cheap per-node kernels, so
/// such loops run sequentially even under [`Execution::Parallel`].
#[cfg(feature = "parallel")]
const GRAIN: usize = 1024;

/// Map `0..n` through `f` into a Vec, parallel or not.
pub fn map_range<F>(exec: Execution, n: usize, f: F) -> Vec<f64>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let mut out = vec![0.0; n];
    fill_range(exec, &mut out, f);
    out
}

/// Fill `out` with `f(j)`, parallel or not.
pub fn fill_range<F>(exec: Execution, out: &mut [f64], f: F)
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    match exec {
        Execution::Sequential => {
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = f(j);
            }
        }
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            if out.len() < 2 * GRAIN {
                for (j, slot) in out.iter_mut().enumerate() {
                    *slot = f(j);
                }
                return;
            }
            out.par_chunks_mut(GRAIN).enumerate().for_each(|(c, chunk)| {
                let base = c * GRAIN;
                for (i, slot) in chunk.iter_mut().enumerate() {
                    *slot = f(base + i);
                }
            });
        }
    }
}

/// Deterministic pairwise summation. Order of operations depends only on
/// the slice length, never on the execution strategy.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_for_benign_input() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
    }

    #[test]
    fn map_range_is_order_preserving() {
        let v = map_range(Execution::default(), 10, |j| j as f64 * 2.0);
        assert_eq!(v, (0..10).map(|j| j as f64 * 2.0).collect::<Vec<_>>());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let f = |j: usize| ((j as f64) * 0.731).sin() / (1.0 + j as f64);
        let a = map_range(Execution::Sequential, 4096, f);
        let b = map_range(Execution::Parallel, 4096, f);
        assert_eq!(a, b);
        assert_eq!(pairwise_sum(&a).to_bits(), pairwise_sum(&b).to_bits());
    }
}
