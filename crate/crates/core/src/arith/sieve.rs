//! Segmented sieve of Eratosthenes.

use std::sync::OnceLock;

use super::ArithError;

/// Entries per sieve segment.
pub const SEGMENT_LEN: u64 = 1 << 20;

/// Largest `limit` accepted by [`sieve_primes`]. The output list for this
/// limit already holds about 2·10^8 entries.
pub const MAX_SIEVE_LIMIT: u64 = 1 << 32;

/// Trial-division cutoff shared with factorization.
pub const SMALL_PRIME_LIMIT: u64 = 1 << 16;

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Primes below 2^16, computed once.
pub fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| simple_sieve(SMALL_PRIME_LIMIT - 1))
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Primes in `[lo, hi]`, ascending, sieved one window at a time.
///
/// `hi` must not exceed [`MAX_SIEVE_LIMIT`] squared (any `u64` below 2^64
/// qualifies). The base primes up to `sqrt(hi)` are sieved first.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_prime_in_range(lo, hi, |p| {
        out.push(p);
        true
    });
    out
}

/// Calls `visit` for every prime in `[lo, hi]` in ascending order until it
/// returns `false`. Returns `false` iff iteration was stopped early.
pub fn for_each_prime_in_range(lo: u64, hi: u64, mut visit: impl FnMut(u64) -> bool) -> bool {
    let lo = lo.max(2);
    if hi < lo {
        return true;
    }
    let root = isqrt(hi);
    let base = if root < SMALL_PRIME_LIMIT {
        small_primes()
            .iter()
            .copied()
            .take_while(|&p| p <= root)
            .collect::<Vec<_>>()
    } else {
        primes_in_range(2, root)
    };
    let mut seg_lo = lo;
    let mut flags = vec![true; SEGMENT_LEN as usize];
    loop {
        let seg_hi = hi.min(seg_lo.saturating_add(SEGMENT_LEN - 1));
        let len = (seg_hi - seg_lo + 1) as usize;
        flags[..len].fill(true);
        for &p in &base {
            let sq = p * p;
            if sq > seg_hi {
                break;
            }
            let first = if sq >= seg_lo {
                Some(sq)
            } else {
                seg_lo.div_ceil(p).checked_mul(p)
            };
            let mut cursor = first;
            while let Some(m) = cursor.filter(|&m| m <= seg_hi) {
                flags[(m - seg_lo) as usize] = false;
                cursor = m.checked_add(p);
            }
        }
        for (i, &is_p) in flags[..len].iter().enumerate() {
            if is_p && !visit(seg_lo + i as u64) {
                return false;
            }
        }
        if seg_hi == hi {
            return true;
        }
        seg_lo = seg_hi + 1;
    }
}

/// All primes `≤ limit`, ascending.
pub fn sieve_primes(limit: u64) -> Result<Vec<u64>, ArithError> {
    if limit > MAX_SIEVE_LIMIT {
        return Err(ArithError::SieveLimit {
            limit,
            ceiling: MAX_SIEVE_LIMIT,
        });
    }
    Ok(primes_in_range(2, limit))
}

/// Dense primality flags for `0..=limit`, for callers that do many lookups.
pub fn prime_flags(limit: u64) -> Result<Vec<bool>, ArithError> {
    if limit > MAX_SIEVE_LIMIT {
        return Err(ArithError::SieveLimit {
            limit,
            ceiling: MAX_SIEVE_LIMIT,
        });
    }
    let mut flags = vec![false; limit as usize + 1];
    for_each_prime_in_range(2, limit, |p| {
        flags[p as usize] = true;
        true
    });
    Ok(flags)
}
