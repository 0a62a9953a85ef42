use crate::arith::isqrt;
use crate::arith::{is_prime, is_prime_u64, is_rough_u64, sieve_primes, Natural};

/// Largest prime used for sieving inside a shard. Survivors that the sieve
/// cannot classify fall back to trial division.
const MARK_LIMIT: u64 = 1 << 24;

/// Scans multiplier ranges `[lo, hi]` for the first even `m` whose candidate
/// `constraint * m - partner` is a valid prime.
pub(super) struct ShardScanner {
    constraint: u64,
    partner: u64,
    /// Odd primes below `constraint` used for marking.
    primes: Vec<u64>,
    /// Every odd prime below `constraint` is in `primes`.
    covers_all: bool,
    /// Odd parts below this bound with no marked factor are 1 or prime.
    prime_below: u128,
}

impl ShardScanner {
    pub(super) fn new(constraint: u64, partner: u64, m_last: u64) -> Self {
        let limit = (constraint - 1).min(isqrt(m_last)).min(MARK_LIMIT);
        let primes: Vec<u64> = sieve_primes(limit)
            .expect("limit is below the sieve ceiling")
            .into_iter()
            .skip(1)
            .collect();
        let top = u128::from(limit) + 1;
        ShardScanner {
            constraint,
            partner,
            primes,
            covers_all: limit == constraint - 1,
            prime_below: top * top,
        }
    }

    fn odd_part_is_rough(&self, m: u64) -> bool {
        let u = m >> m.trailing_zeros();
        if u == 1 || self.covers_all {
            return true;
        }
        if u128::from(u) < self.prime_below {
            return u >= self.constraint;
        }
        is_rough_u64(u, self.constraint)
    }

    /// The first hit `(m, r)` with `lo ≤ m ≤ hi`, if any. `lo` is even.
    pub(super) fn scan(&self, lo: u64, hi: u64, marks: &mut Vec<bool>) -> Option<(u64, Natural)> {
        debug_assert!(lo.is_multiple_of(2));
        if hi < lo {
            return None;
        }
        let slots = ((hi - lo) / 2 + 1) as usize;
        marks.clear();
        marks.resize(slots, false);
        for &q in &self.primes {
            let step = 2 * q;
            let first = lo.div_ceil(step) * step;
            let mut i = ((first - lo) / 2) as usize;
            while i < slots {
                marks[i] = true;
                i += q as usize;
            }
        }
        for (i, &marked) in marks.iter().enumerate() {
            if marked {
                continue;
            }
            let m = lo + 2 * i as u64;
            if !self.odd_part_is_rough(m) {
                continue;
            }
            let r = u128::from(self.constraint) * u128::from(m) - u128::from(self.partner);
            let prime = match u64::try_from(r) {
                Ok(r) => is_prime_u64(r),
                Err(_) => is_prime(&Natural::from(r)),
            };
            if prime {
                return Some((m, Natural::from(r)));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rough_naive(m: u64, c: u64) -> bool {
        let mut u = m;
        while u.is_multiple_of(2) {
            u /= 2;
        }
        (3..c).step_by(2).all(|d| !u.is_multiple_of(d))
    }

    #[test]
    fn filter_agrees_with_trial_division() {
        for c in [3u64, 5, 7, 11, 13, 97, 439, 1009, 406507] {
            for m_last in [100u64, 10_000, 200_000] {
                let s = ShardScanner::new(c, 1, m_last);
                let mut marks = Vec::new();
                for lo in [2u64, 1000, m_last / 2 * 2]
                    .into_iter()
                    .filter(|&lo| lo <= m_last)
                {
                    s.scan(lo, m_last, &mut marks);
                    for (i, &marked) in marks.iter().enumerate() {
                        let m = lo + 2 * i as u64;
                        let kept = !marked && s.odd_part_is_rough(m);
                        assert_eq!(kept, rough_naive(m, c), "c={c} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn odd_hi_and_single_slot() {
        let s = ShardScanner::new(7, 5, 1_000);
        let mut marks = Vec::new();
        // 7 * 4 - 5 = 23
        assert_eq!(s.scan(4, 5, &mut marks), Some((4, Natural::from(23u64))));
        assert_eq!(s.scan(2, 3, &mut marks), None);
    }
}
