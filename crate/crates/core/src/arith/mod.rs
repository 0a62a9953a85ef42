//! Exact integer kernel: primality, smallest odd prime divisors, sieving,
//! roughness, odd primorials and Chinese-remainder solving.

mod crt;
mod factor;
mod natural;
mod primality;
mod sieve;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use crt::{crt_solve, CrtSystem};
pub use factor::{
    factorize, factorize_u64, is_power_of_two, is_rough, is_rough_u64, smallest_odd_prime_divisor,
    smallest_odd_prime_divisor_u64,
};
pub use natural::{Natural, ParseNaturalError};
pub use primality::{is_prime, is_prime_big_with, is_prime_u64, BIG_ROUNDS, U64_WITNESSES};
pub use sieve::{
    for_each_prime_in_range, prime_flags, primes_in_range, sieve_primes, small_primes,
    MAX_SIEVE_LIMIT, SEGMENT_LEN, SMALL_PRIME_LIMIT,
};

pub(crate) use sieve::isqrt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(Natural),
    #[error("{0} is undefined for zero")]
    Zero(&'static str),
    #[error("sieve limit {limit} exceeds the ceiling {ceiling}")]
    SieveLimit { limit: u64, ceiling: u64 },
    #[error("empty congruence system")]
    EmptySystem,
    #[error("modulus {0} is below 2")]
    BadModulus(Natural),
    #[error("moduli {a} and {b} are not coprime (gcd {gcd})")]
    NotCoprime {
        a: Natural,
        b: Natural,
        gcd: Natural,
    },
}

/// A prime `≥ 3`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OddPrime(Natural);

impl OddPrime {
    pub fn new(value: Natural) -> Result<Self, ArithError> {
        if value.is_odd() && value > Natural::ONE && is_prime(&value) {
            Ok(OddPrime(value))
        } else {
            Err(ArithError::NotOddPrime(value))
        }
    }

    pub fn from_u64(value: u64) -> Result<Self, ArithError> {
        Self::new(Natural::from(value))
    }

    pub(crate) fn new_unchecked(value: Natural) -> Self {
        debug_assert!(value.is_odd() && is_prime(&value));
        OddPrime(value)
    }

    pub fn value(&self) -> &Natural {
        &self.0
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.0.as_u64()
    }

    pub fn into_natural(self) -> Natural {
        self.0
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for OddPrime {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OddPrime {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let n = Natural::deserialize(deserializer)?;
        OddPrime::new(n).map_err(serde::de::Error::custom)
    }
}

/// Product of all odd primes `≤ p`.
pub fn odd_primorial(p: &OddPrime) -> Result<Natural, ArithError> {
    let limit = p.as_u64().ok_or(ArithError::SieveLimit {
        limit: u64::MAX,
        ceiling: MAX_SIEVE_LIMIT,
    })?;
    Ok(sieve_primes(limit)?
        .into_iter()
        .skip(1)
        .map(Natural::from)
        .product())
}
