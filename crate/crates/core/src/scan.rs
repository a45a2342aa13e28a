//! Deterministic parallel reductions over the primes up to a bound.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::primes::{segments, Sieve, SieveConfig};
use crate::sum::Neumaier;

/// Execution settings for sums over primes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanOptions {
    /// Worker threads; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
    pub sieve: SieveConfig,
}

impl ScanOptions {
    pub fn with_threads(threads: usize) -> Self {
        Self {
            threads: Some(threads),
            ..Self::default()
        }
    }

    /// Runs `op` inside a pool sized by `threads`.
    pub fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> Result<R> {
        match self.threads {
            None => Ok(op()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
                Ok(pool.install(op))
            }
        }
    }
}

/// Maps every sieve segment of `[2, hi]` through `f` and returns the results
/// in ascending segment order. `f` receives the segment bounds and its primes.
pub(crate) fn scan_chunks<T, F>(hi: u64, opts: &ScanOptions, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, u64, &[u64]) -> T + Sync,
{
    if hi < 2 {
        return Ok(Vec::new());
    }
    let sieve = Sieve::new(hi, &opts.sieve)?;
    let chunks: Vec<(u64, u64)> = segments(2, hi, sieve.segment_len()).collect();
    opts.install(|| {
        chunks
            .par_iter()
            .map_init(Vec::new, |buf, &(a, b)| {
                buf.clear();
                sieve.sieve_into(a, b, buf);
                f(a, b, buf)
            })
            .collect()
    })
}

/// Compensated sums of `N` per-prime quantities over `p <= hi`. Each segment
/// is summed on its own and segments are merged in ascending order, so the
/// result is bit-identical for every thread count.
pub(crate) fn sum_over_primes<const N: usize, F>(
    hi: u64,
    opts: &ScanOptions,
    term: F,
) -> Result<[f64; N]>
where
    F: Fn(u64) -> [f64; N] + Sync,
{
    let partials = scan_chunks(hi, opts, |_, _, primes| {
        let mut acc = [Neumaier::new(); N];
        for &p in primes {
            let t = term(p);
            for (a, v) in acc.iter_mut().zip(t) {
                a.add(v);
            }
        }
        acc
    })?;
    let mut total = [Neumaier::new(); N];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.absorb(p);
        }
    }
    Ok(total.map(|t| t.value()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_sum_is_thread_count_invariant() {
        let small = ScanOptions {
            threads: Some(1),
            sieve: SieveConfig {
                segment_len: 1 << 12,
                ..SieveConfig::default()
            },
        };
        let many = ScanOptions {
            threads: Some(4),
            ..small
        };
        let f = |p: u64| [1.0 / p as f64, (p as f64).ln()];
        let a = sum_over_primes(200_000, &small, f).unwrap();
        let b = sum_over_primes(200_000, &many, f).unwrap();
        assert_eq!(a[0].to_bits(), b[0].to_bits());
        assert_eq!(a[1].to_bits(), b[1].to_bits());
    }

    #[test]
    fn counts_primes() {
        let opts = ScanOptions::default();
        let [count] = sum_over_primes(10_000, &opts, |_| [1.0]).unwrap();
        assert_eq!(count, 1229.0);
        let [none] = sum_over_primes(1, &opts, |_| [1.0]).unwrap();
        assert_eq!(none, 0.0);
    }
}
