//! Strong-pseudoprime (Miller–Rabin) primality testing.
//!
//! Below 2^64 the test is deterministic: the seven bases
//! `2, 325, 9375, 28178, 450775, 9780504, 1795265022` (Jim Sinclair, 2011)
//! admit no strong pseudoprime under 2^64. Above that, [`BIG_ROUNDS`]
//! random bases are used, giving an error probability below 4^-64 = 2^-128.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, RngCore};

use super::natural::Natural;
use super::sieve::small_primes;

/// Witness set that makes the strong-pseudoprime test exact on `u64`.
pub const U64_WITNESSES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// Random rounds used for inputs of 2^64 and above.
pub const BIG_ROUNDS: u32 = 64;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn strong_probable_prime_u64(n: u64, a: u64, d: u64, s: u32) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Exact primality for any `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    U64_WITNESSES
        .iter()
        .all(|&a| strong_probable_prime_u64(n, a, d, s))
}

fn strong_probable_prime_big(n: &BigUint, a: &BigUint, d: &BigUint, s: u64) -> bool {
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let mut x = a.modpow(d, n);
    if x == one || x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_one {
            return true;
        }
    }
    false
}

/// Probabilistic test for `n ≥ 2^64` using a caller-supplied generator.
pub fn is_prime_big_with<R: RngCore + ?Sized>(n: &BigUint, rounds: u32, rng: &mut R) -> bool {
    let n_nat = Natural::from_biguint(n.clone());
    if let Some(small) = n_nat.as_u64() {
        return is_prime_u64(small);
    }
    for &p in small_primes().iter().take(256) {
        if n_nat.rem_u64(p) == 0 {
            return false;
        }
    }
    let n_minus_one = n - BigUint::one();
    let s = n_minus_one.trailing_zeros().expect("n - 1 is nonzero");
    let d = &n_minus_one >> s;
    // bases drawn uniformly from [2, n - 2]
    let span = n - BigUint::from(3u32);
    let byte_len = n.bits().div_ceil(8) as usize + 8;
    let mut buf = vec![0u8; byte_len];
    for _ in 0..rounds {
        rng.fill_bytes(&mut buf);
        let a = BigUint::from_bytes_le(&buf) % &span + BigUint::from(2u32);
        if !strong_probable_prime_big(n, &a, &d, s) {
            return false;
        }
    }
    true
}

/// Primality of an arbitrary natural number.
///
/// Exact below 2^64; above, [`BIG_ROUNDS`] random strong-pseudoprime rounds
/// drawn from the thread-local generator.
pub fn is_prime(n: &Natural) -> bool {
    match n.as_u64() {
        Some(v) => is_prime_u64(v),
        None => is_prime_big_with(&n.to_biguint(), BIG_ROUNDS, &mut rand::rng()),
    }
}

/// Random element of `[lo, hi)` for `u64`; used by factorization.
pub(crate) fn random_below<R: Rng + ?Sized>(rng: &mut R, lo: u64, hi: u64) -> u64 {
    rng.random_range(lo..hi)
}
