//! Ramanujan tau via the pentagonal number theorem.

use crate::error::{Error, Result};

/// Largest `N` accepted by [`tau_table`].
pub const TAU_TABLE_LIMIT: usize = 1_000_000;

/// Exponents and signs of the nonzero terms of `prod_{n>=1} (1 - q^n)` up to
/// degree `max_degree`: `sum_k (-1)^k q^{k(3k-1)/2}` over all integers `k`.
pub fn pentagonal_terms(max_degree: usize) -> Vec<(usize, i8)> {
    let mut terms = vec![(0usize, 1i8)];
    for k in 1usize.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let lower = k * (3 * k - 1) / 2;
        if lower > max_degree {
            break;
        }
        terms.push((lower, sign));
        let upper = k * (3 * k + 1) / 2;
        if upper <= max_degree {
            terms.push((upper, sign));
        }
    }
    terms.sort_unstable();
    terms
}

/// `tau(n)` for `1 <= n <= limit`, as the coefficients of
/// `q prod (1 - q^n)^24`. Index 0 of the returned vector is unused (zero).
///
/// Intermediate powers of the Euler product have coefficients that overflow
/// 128 bits, so the expansion runs in wrapping arithmetic (exact modulo
/// 2^128). The final coefficients satisfy `|tau(n)| < 2^127` for every `n` in
/// range, so the wrapped values are the true ones.
pub fn tau_table(limit: usize) -> Result<Vec<i128>> {
    if limit > TAU_TABLE_LIMIT {
        return Err(Error::Capacity {
            what: "tau table size",
            requested: limit as u64,
            limit: TAU_TABLE_LIMIT as u64,
        });
    }
    if limit == 0 {
        return Ok(vec![0]);
    }
    // coefficient of q^n in tau's series is the coefficient of q^(n-1) in prod^24
    let len = limit;
    let terms = pentagonal_terms(len - 1);
    let mut cur = vec![0i128; len];
    for &(e, s) in &terms {
        cur[e] = s as i128;
    }
    let mut next = vec![0i128; len];
    for _ in 1..24 {
        next.iter_mut().for_each(|v| *v = 0);
        for &(e, s) in &terms {
            let (dst, src) = (&mut next[e..], &cur[..len - e]);
            if s > 0 {
                dst.iter_mut().zip(src).for_each(|(d, v)| *d = d.wrapping_add(*v));
            } else {
                dst.iter_mut().zip(src).for_each(|(d, v)| *d = d.wrapping_sub(*v));
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let mut out = Vec::with_capacity(limit + 1);
    out.push(0);
    out.extend_from_slice(&cur);
    Ok(out)
}
