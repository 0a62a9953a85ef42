//! Left extension: given consecutive terms `p1, p2`, find an odd prime `p0`
//! whose sum with `p1` has `p2` as its smallest odd prime divisor.

use serde::{Deserialize, Serialize};

use crate::arith::{
    crt_solve, for_each_prime_in_range, is_prime, is_rough, is_rough_u64, sieve_primes,
    smallest_odd_prime_divisor, smallest_odd_prime_divisor_u64, CrtSystem, Natural, OddPrime,
};

use super::SeqError;

/// Default number of progression terms scanned by [`extend_left_crt`].
pub const DEFAULT_CRT_STEPS: u64 = 1_000_000;

/// Result of a bounded minimal left-extension search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Extension {
    Found(OddPrime),
    /// No valid odd prime at or below the bound.
    Exhausted,
}

impl Extension {
    pub fn found(&self) -> Option<&OddPrime> {
        match self {
            Extension::Found(p) => Some(p),
            Extension::Exhausted => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtExtension {
    pub p0: OddPrime,
    pub system: CrtSystem,
    /// `n` such that `p0 = solution + n * combined_modulus`.
    pub progression_index: u64,
}

/// The congruence system whose solutions `x` make `p2` the smallest odd prime
/// divisor of `x + p1`.
///
/// For every odd prime `q < p2` the residue is `1 - p1 (mod q)`, so that
/// `x + p1 ≡ 1`. When that residue is zero (`p1 ≡ 1 mod q`) every solution
/// would be divisible by `q`, so `2 - p1` is used instead and `x + p1 ≡ 2`.
/// The last congruence is `x ≡ -p1 (mod p2)`.
pub fn left_extension_congruences(
    p1: &OddPrime,
    p2: &OddPrime,
) -> Result<Vec<(Natural, Natural)>, SeqError> {
    let limit = p2.as_u64().ok_or(crate::arith::ArithError::SieveLimit {
        limit: u64::MAX,
        ceiling: crate::arith::MAX_SIEVE_LIMIT,
    })?;
    let mut out = Vec::new();
    for q in sieve_primes(limit)?.into_iter().skip(1) {
        let p1_mod = p1.value().rem_u64(q);
        let residue = if q == limit {
            (q - p1_mod) % q
        } else {
            let shifted = (q + 1 - p1_mod) % q;
            if shifted == 0 {
                1
            } else {
                shifted
            }
        };
        out.push((Natural::from(residue), Natural::from(q)));
    }
    Ok(out)
}

/// Left extension through the Chinese remainder theorem and a scan of the
/// arithmetic progression `a, a + Q, a + 2Q, ...` for its first odd prime.
pub fn extend_left_crt(
    p1: &OddPrime,
    p2: &OddPrime,
    max_steps: u64,
) -> Result<CrtExtension, SeqError> {
    if p1 == p2 {
        return Err(SeqError::EqualPrimes(p1.clone()));
    }
    let congruences = left_extension_congruences(p1, p2)?;
    let system = crt_solve(&congruences)?;
    let a = &system.solution;
    let modulus = &system.combined_modulus;
    let g = a.gcd(modulus);
    if !g.is_one() {
        return Err(SeqError::Degenerate { gcd: g });
    }

    let mut x = a.clone();
    for n in 0..max_steps {
        if x.is_odd() && is_prime(&x) {
            let p0 = OddPrime::new(x)?;
            let check = smallest_odd_prime_divisor(&(p0.value() + p1.value()))?;
            if check.as_ref() != Some(p2) {
                return Err(SeqError::Postcondition(format!(
                    "p0 = {p0}: smallest odd prime divisor of p0 + {p1} is {check:?}, not {p2}"
                )));
            }
            return Ok(CrtExtension {
                p0,
                system,
                progression_index: n,
            });
        }
        x = &x + modulus;
    }
    Err(SeqError::BoundExhausted { steps: max_steps })
}

/// Smallest even multiplier `m ≥ 2` with `constraint * m - partner ≥ 3`.
pub(crate) fn first_multiplier(constraint: u64, partner: u64) -> u64 {
    let need = u128::from(partner) + 3;
    let m = need.div_ceil(u128::from(constraint)).max(2);
    let m = m + (m & 1);
    u64::try_from(m).unwrap_or(u64::MAX - 1)
}

/// Largest multiplier whose candidate stays within `bound`.
pub(crate) fn last_multiplier(constraint: u64, partner: u64, bound: &Natural) -> u64 {
    let top = bound + partner;
    (&top / constraint).as_u64().unwrap_or(u64::MAX)
}

/// The least odd prime `r ≤ bound` such that `p2` is the smallest odd prime
/// divisor of `p1 + r`.
///
/// Every such `r` has the form `p2 * m - p1` with `m` even (so that `r` is
/// odd) and the odd part of `m` free of primes below `p2` (so that nothing
/// smaller than `p2` divides the sum). Candidates increase with `m`, so the
/// first prime candidate is the minimum.
pub fn extend_left_minimal(p1: &OddPrime, p2: &OddPrime, bound: &Natural) -> Extension {
    match (p1.as_u64(), p2.as_u64()) {
        (Some(partner), Some(constraint)) => minimal_u64(partner, constraint, bound),
        _ => minimal_natural(p1, p2, bound),
    }
}

fn minimal_u64(partner: u64, constraint: u64, bound: &Natural) -> Extension {
    let m_max = last_multiplier(constraint, partner, bound);
    let mut m = first_multiplier(constraint, partner);
    while m <= m_max {
        let odd = m >> m.trailing_zeros();
        if is_rough_u64(odd, constraint) {
            let r = Natural::from(u128::from(constraint) * u128::from(m) - u128::from(partner));
            if &r <= bound && is_prime(&r) {
                return Extension::Found(OddPrime::new(r).expect("odd by construction"));
            }
        }
        match m.checked_add(2) {
            Some(next) => m = next,
            None => break,
        }
    }
    Extension::Exhausted
}

fn minimal_natural(p1: &OddPrime, p2: &OddPrime, bound: &Natural) -> Extension {
    let (partner, constraint) = (p1.value(), p2.value());
    let mut m = Natural::from(2u64);
    loop {
        let Some(r) = (constraint * &m).checked_sub(partner) else {
            m = m + 2u64;
            continue;
        };
        if &r > bound {
            return Extension::Exhausted;
        }
        if r >= Natural::from(3u64) && is_rough(&m.odd_part(), constraint) && is_prime(&r) {
            return Extension::Found(OddPrime::new(r).expect("odd by construction"));
        }
        m = m + 2u64;
    }
}

/// Reference scan over odd primes `r ≤ bound` in increasing order, testing
/// the defining property directly. Bounds beyond `u64` are clamped.
pub fn extend_left_naive(p1: &OddPrime, p2: &OddPrime, bound: &Natural) -> Extension {
    let (Some(partner), Some(constraint)) = (p1.as_u64(), p2.as_u64()) else {
        return extend_left_minimal(p1, p2, bound);
    };
    let hi = bound.as_u64().unwrap_or(u64::MAX);
    let mut found = None;
    for_each_prime_in_range(3, hi, |r| {
        let sum = u128::from(partner) + u128::from(r);
        let least = match u64::try_from(sum) {
            Ok(s) => smallest_odd_prime_divisor_u64(s).expect("sum is positive"),
            Err(_) => smallest_odd_prime_divisor(&Natural::from(sum))
                .expect("sum is positive")
                .and_then(|p| p.as_u64()),
        };
        if least == Some(constraint) {
            found = Some(r);
            return false;
        }
        true
    });
    match found {
        Some(r) => Extension::Found(OddPrime::from_u64(r).expect("sieved prime")),
        None => Extension::Exhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{crt_solve, is_prime_u64, odd_primorial};

    fn op(v: u64) -> OddPrime {
        OddPrime::from_u64(v).unwrap()
    }

    fn found(e: Extension) -> Option<u64> {
        e.found().and_then(|p| p.as_u64())
    }

    fn sopd(v: u64) -> u64 {
        let mut m = v;
        while m.is_multiple_of(2) {
            m /= 2;
        }
        // 0 stands for "no odd prime divisor"
        (3..=m).step_by(2).find(|d| m.is_multiple_of(*d)).unwrap_or(0)
    }

    /// Scan odd numbers upward, testing primality and the divisor property.
    fn oracle(p1: u64, p2: u64, bound: u64) -> Option<u64> {
        (3..=bound)
            .step_by(2)
            .find(|&r| is_prime_u64(r) && sopd(p1 + r) == p2)
    }

    #[test]
    fn crt_examples() {
        // oracle: scan 0..105 for the system {2 mod 3, 1 mod 5, 2 mod 7}
        let a = (0..105u64).find(|x| x % 3 == 2 && x % 5 == 1 && x % 7 == 2);
        assert_eq!(a, Some(86));
        let e = extend_left_crt(&op(5), &op(7), DEFAULT_CRT_STEPS).unwrap();
        assert_eq!(e.p0, op(191));
        assert_eq!(e.system.solution, Natural::from(86u64));
        assert_eq!(e.system.combined_modulus, Natural::from(105u64));
        assert_eq!(e.progression_index, 1);
        assert_eq!(191 + 5, 196);
        assert_eq!(sopd(196), 7);

        let e = extend_left_crt(&op(7), &op(3), DEFAULT_CRT_STEPS).unwrap();
        assert_eq!(e.p0, op(5));
        assert_eq!(
            e.system.congruences,
            vec![(Natural::from(2u64), Natural::from(3u64))]
        );

        assert!(matches!(
            extend_left_crt(&op(3), &op(3), DEFAULT_CRT_STEPS),
            Err(SeqError::EqualPrimes(_))
        ));
    }

    #[test]
    fn shifted_residue_avoids_common_factor() {
        // 13 ≡ 1 (mod 3): the plain residue 1 - 13 ≡ 0 (mod 3) would force 3 | a
        let plain = crt_solve(&[
            (Natural::from(0u64), Natural::from(3u64)),
            (Natural::from(2u64), Natural::from(5u64)),
        ])
        .unwrap();
        assert_eq!(
            plain.solution.gcd(&plain.combined_modulus),
            Natural::from(3u64)
        );

        let cong = left_extension_congruences(&op(13), &op(5)).unwrap();
        assert_eq!(cong[0], (Natural::from(1u64), Natural::from(3u64)));
        let e = extend_left_crt(&op(13), &op(5), DEFAULT_CRT_STEPS).unwrap();
        let p0 = e.p0.as_u64().unwrap();
        assert_eq!(sopd(p0 + 13), 5);
    }

    #[test]
    fn crt_exhaustion() {
        assert!(matches!(
            extend_left_crt(&op(5), &op(7), 1),
            Err(SeqError::BoundExhausted { steps: 1 })
        ));
    }

    #[test]
    fn crt_big_modulus() {
        let e = extend_left_crt(&op(3), &op(61), DEFAULT_CRT_STEPS).unwrap();
        assert_eq!(e.system.combined_modulus, odd_primorial(&op(61)).unwrap());
        assert!(!e.p0.value().is_small());
        let sum = e.p0.value() + 3u64;
        assert_eq!(smallest_odd_prime_divisor(&sum).unwrap(), Some(op(61)));
    }

    #[test]
    fn minimal_examples() {
        let b = Natural::from(1_000_000u64);
        assert_eq!(oracle(5, 7, 1_000_000), Some(23));
        assert_eq!(found(extend_left_minimal(&op(5), &op(7), &b)), Some(23));
        assert_eq!(found(extend_left_minimal(&op(7), &op(3), &b)), Some(5));
        assert_eq!(found(extend_left_minimal(&op(5), &op(3), &b)), Some(7));
        assert_eq!(
            extend_left_minimal(&op(67), &op(406507), &Natural::from(2_000_000_000u64)),
            Extension::Exhausted
        );
    }

    #[test]
    fn constant_extension() {
        let b = Natural::from(100u64);
        assert_eq!(found(extend_left_minimal(&op(7), &op(7), &b)), Some(7));
    }

    #[test]
    fn bound_is_inclusive() {
        assert_eq!(
            found(extend_left_minimal(&op(5), &op(7), &Natural::from(23u64))),
            Some(23)
        );
        assert_eq!(
            extend_left_minimal(&op(5), &op(7), &Natural::from(22u64)),
            Extension::Exhausted
        );
        assert_eq!(
            found(extend_left_naive(&op(5), &op(7), &Natural::from(23u64))),
            Some(23)
        );
        assert_eq!(
            extend_left_naive(&op(5), &op(7), &Natural::from(22u64)),
            Extension::Exhausted
        );
    }

    #[test]
    fn natural_path_matches_u64_path() {
        let b = Natural::from(50_000u64);
        for (p1, p2) in [(5, 7), (7, 3), (101, 13), (13, 101), (3, 3), (199, 31)] {
            assert_eq!(
                minimal_natural(&op(p1), &op(p2), &b),
                minimal_u64(p1, p2, &b),
                "({p1}, {p2})"
            );
        }
    }

    #[test]
    fn structured_matches_naive_oracle() {
        let primes: Vec<u64> = sieve_primes(200).unwrap().into_iter().skip(1).collect();
        let bound = 100_000;
        let b = Natural::from(bound);
        for &p1 in &primes {
            for &p2 in &primes {
                let expected = oracle(p1, p2, bound);
                assert_eq!(found(extend_left_minimal(&op(p1), &op(p2), &b)), expected);
                assert_eq!(found(extend_left_naive(&op(p1), &op(p2), &b)), expected);
            }
        }
    }

    #[test]
    fn multiplier_range() {
        assert_eq!(first_multiplier(7, 5), 2);
        assert_eq!(first_multiplier(3, 406507), 135504);
        assert_eq!(
            last_multiplier(406507, 67, &Natural::from(2_000_000_000u64)),
            4919
        );
    }
}
