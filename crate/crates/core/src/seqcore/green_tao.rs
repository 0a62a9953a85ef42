//! Long forward sequences from arithmetic progressions of primes.
//!
//! If `p_0, ..., p_n` with `n = 2^(k-2)` is a progression of primes, then
//! `p_a + p_b = 2 p_((a+b)/2)`, so starting the forward recurrence from
//! `(p_0, p_n)` walks the progression by repeated halving of the index gap
//! and yields at least `k` terms.

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_flags, ArithError, Natural, OddPrime, MAX_SIEVE_LIMIT};

use super::{generate_forward, PfibSequence, Seed, SeqError};

/// `first + j * difference` for `0 ≤ j < length`, all prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeAp {
    first: Natural,
    difference: Natural,
    length: usize,
}

impl PrimeAp {
    pub fn new(first: Natural, difference: Natural, length: usize) -> Result<Self, SeqError> {
        if length == 0 {
            return Err(SeqError::InvalidAp("length must be positive".into()));
        }
        if difference.is_zero() && length > 1 {
            return Err(SeqError::InvalidAp("difference must be positive".into()));
        }
        let ap = PrimeAp {
            first,
            difference,
            length,
        };
        for j in 0..length {
            let t = ap.term(j as u64);
            if !is_prime(&t) {
                return Err(SeqError::InvalidAp(format!("term {j} = {t} is not prime")));
            }
        }
        Ok(ap)
    }

    pub fn first(&self) -> &Natural {
        &self.first
    }

    pub fn difference(&self) -> &Natural {
        &self.difference
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn term(&self, j: u64) -> Natural {
        &self.first + &self.difference * j
    }

    pub fn terms(&self) -> Vec<Natural> {
        (0..self.length as u64).map(|j| self.term(j)).collect()
    }
}

/// `b_1, ..., b_k` with `b_1 = 0`, `b_2 = 2^(k-2)` and
/// `b_(i+2) = (b_i + b_(i+1)) / 2`.
pub fn index_recurrence(k: u32) -> Result<Vec<u64>, SeqError> {
    if !(3..=65).contains(&k) {
        return Err(SeqError::KOutOfRange(k));
    }
    let mut b: Vec<u64> = vec![0, 1 << (k - 2)];
    while b.len() < k as usize {
        let sum = u128::from(b[b.len() - 2]) + u128::from(b[b.len() - 1]);
        if sum % 2 != 0 {
            return Err(SeqError::Postcondition(format!(
                "b_{} = {sum}/2 is not an integer",
                b.len() + 1
            )));
        }
        b.push((sum / 2) as u64);
    }
    Ok(b)
}

/// The lexicographically least `(first, difference)` prime progression of
/// the given length with `first ≤ limit` and `difference ≤ limit`.
pub fn find_prime_ap(length: usize, limit: u64) -> Result<Option<PrimeAp>, SeqError> {
    if length < 2 {
        return Err(SeqError::InvalidAp(format!(
            "length must be at least 2, got {length}"
        )));
    }
    let top = (length as u64)
        .checked_mul(limit)
        .filter(|&t| t <= MAX_SIEVE_LIMIT)
        .ok_or(ArithError::SieveLimit {
            limit: u64::MAX,
            ceiling: MAX_SIEVE_LIMIT,
        })?;
    let flags = prime_flags(top)?;
    let is_p = |n: u64| flags[n as usize];
    let span = (length - 1) as u64;
    for first in (2..=limit).filter(|&n| is_p(n)) {
        // every difference but one is ruled out by parity unless first = 2
        let step = if first != 2 && length > 2 { 2 } else { 1 };
        let mut d = step;
        while d <= limit {
            if (1..=span).all(|j| is_p(first + j * d)) {
                let ap = PrimeAp {
                    first: Natural::from(first),
                    difference: Natural::from(d),
                    length,
                };
                return Ok(Some(ap));
            }
            d += step;
        }
    }
    Ok(None)
}

/// Runs the forward recurrence from `(ap[0], ap[n])` with `n = 2^(k-2)` and
/// checks that term `i` is `ap[b_i]` for the first `k` terms.
pub fn green_tao_sequence(k: u32, ap: &PrimeAp) -> Result<PfibSequence, SeqError> {
    let b = index_recurrence(k)?;
    let n = b[1];
    if ap.len() as u128 != u128::from(n) + 1 {
        return Err(SeqError::ApLength {
            expected: n + 1,
            got: ap.len(),
        });
    }
    let odd = |v: Natural| OddPrime::new(v).map_err(|e| SeqError::InvalidAp(e.to_string()));
    let seed = Seed::new(odd(ap.term(0))?, odd(ap.term(n))?);
    let seq = generate_forward(&seed, usize::MAX)?;
    if seq.terms.len() < b.len() {
        return Err(SeqError::NotEnoughTerms {
            needed: b.len(),
            got: seq.terms.len(),
        });
    }
    for (i, (&bi, term)) in b.iter().zip(&seq.terms).enumerate() {
        let expected = ap.term(bi);
        if term.value() != &expected {
            return Err(SeqError::ApMismatch {
                index: i + 1,
                expected,
                got: term.value().clone(),
            });
        }
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ap(first: u64, diff: u64, len: usize) -> PrimeAp {
        PrimeAp::new(Natural::from(first), Natural::from(diff), len).unwrap()
    }

    fn values(seq: &PfibSequence) -> Vec<u64> {
        seq.terms.iter().map(|p| p.as_u64().unwrap()).collect()
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(index_recurrence(3).unwrap(), [0, 2, 1]);
        assert_eq!(index_recurrence(4).unwrap(), [0, 4, 2, 3]);
        assert_eq!(index_recurrence(5).unwrap(), [0, 8, 4, 6, 5]);
        assert!(matches!(index_recurrence(2), Err(SeqError::KOutOfRange(2))));
    }

    #[test]
    fn recurrence_is_integral() {
        for k in 3..=30 {
            let b = index_recurrence(k).unwrap();
            assert_eq!(b.len(), k as usize);
            let (mut x, mut y) = (0i128, 1i128 << (k - 2));
            for (i, &bi) in b.iter().enumerate().skip(2) {
                let s = x + y;
                assert_eq!(s % 2, 0, "k={k} i={i}");
                (x, y) = (y, s / 2);
                assert_eq!(bi as i128, y);
            }
        }
        assert_eq!(index_recurrence(65).unwrap().len(), 65);
    }

    #[test]
    fn prime_ap_validation() {
        assert!(PrimeAp::new(Natural::from(5u64), Natural::from(6u64), 6).is_err());
        assert!(PrimeAp::new(Natural::from(5u64), Natural::ZERO, 2).is_err());
        assert_eq!(ap(3, 2, 3).terms(), [3u64, 5, 7].map(Natural::from));
    }

    /// Lexicographic scan with trial-division primality.
    fn oracle(length: u64, limit: u64) -> Option<(u64, u64)> {
        let prime = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        (2..=limit).filter(|&f| prime(f)).find_map(|f| {
            (1..=limit)
                .find(|&d| (0..length).all(|j| prime(f + j * d)))
                .map(|d| (f, d))
        })
    }

    #[test]
    fn search_examples() {
        for (len, limit) in [(2usize, 10u64), (3, 50), (5, 100), (6, 200), (9, 1000)] {
            let got = find_prime_ap(len, limit).unwrap().map(|a| {
                (
                    a.first().as_u64().unwrap(),
                    a.difference().as_u64().unwrap(),
                )
            });
            assert_eq!(got, oracle(len as u64, limit), "length {len}");
        }
        assert_eq!(oracle(5, 100), Some((5, 6)));
        assert_eq!(oracle(9, 1000), Some((199, 210)));
        assert_eq!(find_prime_ap(9, 100).unwrap(), None);
    }

    #[test]
    fn construction_examples() {
        let s = green_tao_sequence(4, &ap(5, 6, 5)).unwrap();
        assert_eq!(values(&s), [5, 29, 17, 23, 5, 7, 3, 5]);
        let s = green_tao_sequence(3, &ap(3, 2, 3)).unwrap();
        assert_eq!(values(&s)[..3], [3, 7, 5]);
        let s = green_tao_sequence(5, &ap(199, 210, 9)).unwrap();
        assert!(s.terms.len() >= 5);
        assert!(matches!(
            green_tao_sequence(4, &ap(5, 6, 4)),
            Err(SeqError::ApLength {
                expected: 5,
                got: 4
            })
        ));
    }

    #[test]
    fn ap_containing_two_is_rejected() {
        assert!(matches!(
            green_tao_sequence(3, &ap(2, 1, 2)),
            Err(SeqError::ApLength { .. })
        ));
        let bad = PrimeAp {
            first: Natural::from(2u64),
            difference: Natural::from(1u64),
            length: 3,
        };
        assert!(matches!(
            green_tao_sequence(3, &bad),
            Err(SeqError::InvalidAp(_))
        ));
    }
}
