//! Prime generation and quadratic characters.
//!
//! Primes come from a segmented sieve of Eratosthenes that stores odd
//! numbers only, one bit each. Segments are independent, so callers can
//! sieve disjoint ranges on different threads and merge the results in
//! ascending order.

use crate::error::{Error, Result};

/// Default number of integers covered by one sieve segment.
pub const DEFAULT_SEGMENT_LEN: u64 = 1 << 20;

/// Default upper limit accepted by the sieve.
pub const DEFAULT_MAX_HI: u64 = 1 << 40;

/// Default cap on the number of primes a [`PrimeRange`] may hold.
pub const DEFAULT_MATERIALIZE_LIMIT: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    pub segment_len: u64,
    pub max_hi: u64,
    pub materialize_limit: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            segment_len: DEFAULT_SEGMENT_LEN,
            max_hi: DEFAULT_MAX_HI,
            materialize_limit: DEFAULT_MATERIALIZE_LIMIT,
        }
    }
}

/// The primes of a closed interval `[lo, hi]`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
    pub primes: Vec<u64>,
}

impl PrimeRange {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// Integer square root, `floor(sqrt(n))`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Sieving state for every range up to a fixed upper bound: the odd base
/// primes up to its square root.
#[derive(Debug, Clone)]
pub struct Sieve {
    hi: u64,
    segment_len: u64,
    base: Vec<u64>,
}

impl Sieve {
    pub fn new(hi: u64, config: &SieveConfig) -> Result<Self> {
        if hi > config.max_hi {
            return Err(Error::Capacity {
                what: "sieve upper bound",
                requested: hi,
                limit: config.max_hi,
            });
        }
        if config.segment_len < 64 {
            return Err(Error::Domain(format!(
                "segment length {} is below the minimum of 64",
                config.segment_len
            )));
        }
        Ok(Self {
            hi,
            segment_len: config.segment_len,
            base: small_odd_primes(isqrt(hi)),
        })
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn segment_len(&self) -> u64 {
        self.segment_len
    }

    /// Appends the primes of `[lo, hi]` to `out`. The range may be of any
    /// length; memory use is proportional to it.
    pub fn sieve_into(&self, lo: u64, hi: u64, out: &mut Vec<u64>) {
        debug_assert!(hi <= self.hi, "range exceeds sieve bound");
        if hi < lo || hi < 2 {
            return;
        }
        if lo <= 2 {
            out.push(2);
        }
        let first_odd = (lo.max(3)) | 1;
        if first_odd > hi {
            return;
        }
        let count = ((hi - first_odd) / 2 + 1) as usize;
        let mut bits = vec![u64::MAX; count.div_ceil(64)];
        if count % 64 != 0 {
            let last = bits.len() - 1;
            bits[last] = (1u64 << (count % 64)) - 1;
        }

        for &q in &self.base {
            let sq = q * q;
            if sq > hi {
                break;
            }
            let mut start = if sq >= first_odd {
                sq
            } else {
                first_odd.div_ceil(q) * q
            };
            if start % 2 == 0 {
                start += q;
            }
            let mut idx = ((start - first_odd) / 2) as usize;
            let step = q as usize;
            while idx < count {
                bits[idx >> 6] &= !(1u64 << (idx & 63));
                idx += step;
            }
        }

        for (w, &word) in bits.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let bit = word.trailing_zeros() as u64;
                out.push(first_odd + 2 * (w as u64 * 64 + bit));
                word &= word - 1;
            }
        }
    }

    /// Calls `f` once per prime in `[lo, hi]` in ascending order, sieving one
    /// segment at a time.
    pub fn for_each_prime<F: FnMut(u64)>(&self, lo: u64, hi: u64, mut f: F) {
        let mut buf = Vec::new();
        for (a, b) in segments(lo, hi, self.segment_len) {
            buf.clear();
            self.sieve_into(a, b, &mut buf);
            buf.iter().for_each(|&p| f(p));
        }
    }
}

/// Splits `[lo, hi]` into consecutive closed segments aligned to multiples
/// of `len`, so the layout depends only on the range and the segment length.
pub fn segments(lo: u64, hi: u64, len: u64) -> impl Iterator<Item = (u64, u64)> {
    let mut next = if hi >= lo { Some(lo) } else { None };
    std::iter::from_fn(move || {
        let a = next?;
        let b = ((a / len) * len).saturating_add(len - 1).min(hi);
        next = if b < hi { Some(b + 1) } else { None };
        Some((a, b))
    })
}

fn small_odd_primes(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

/// All primes in `[lo, hi]` with the default configuration.
pub fn primes_in_range(lo: u64, hi: u64) -> Result<PrimeRange> {
    primes_in_range_with(lo, hi, &SieveConfig::default())
}

pub fn primes_in_range_with(lo: u64, hi: u64, config: &SieveConfig) -> Result<PrimeRange> {
    if hi < lo {
        return Err(Error::Domain(format!("empty range: lo = {lo} > hi = {hi}")));
    }
    let sieve = Sieve::new(hi, config)?;
    let mut primes = Vec::new();
    let mut buf = Vec::new();
    for (a, b) in segments(lo, hi, config.segment_len) {
        buf.clear();
        sieve.sieve_into(a, b, &mut buf);
        primes.extend_from_slice(&buf);
        if primes.len() > config.materialize_limit {
            return Err(Error::Capacity {
                what: "materialized prime count",
                requested: primes.len() as u64,
                limit: config.materialize_limit as u64,
            });
        }
    }
    Ok(PrimeRange { lo, hi, primes })
}

/// The Kronecker symbol `(d / n)`.
pub fn kronecker_symbol(d: i64, n: u64) -> i8 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1i8;
    let twos = n.trailing_zeros();
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        n >>= twos;
        // (d/2) = +1 for d = ±1 mod 8, -1 for d = ±3 mod 8
        let r = d.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    if n == 1 {
        return result;
    }
    let a = (d as i128).rem_euclid(n as i128) as u64;
    result * jacobi(a, n)
}

/// Jacobi symbol `(a / n)` for odd `n`.
fn jacobi(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut result = 1i8;
    a %= n;
    while a != 0 {
        let twos = a.trailing_zeros();
        a >>= twos;
        if twos % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

fn is_squarefree(mut n: u64) -> bool {
    let mut q = 2u64;
    while q * q <= n {
        if n % q == 0 {
            n /= q;
            if n % q == 0 {
                return false;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    true
}

/// Whether `d` is the discriminant of a quadratic field.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let a = d.unsigned_abs();
    match d.rem_euclid(4) {
        1 => is_squarefree(a),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}
