//! Trial division below 2^16, Brent's variant of Pollard rho above.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngCore};

use super::natural::Natural;
use super::primality::{is_prime, is_prime_u64, mul_mod, random_below};
use super::sieve::small_primes;
use super::{ArithError, OddPrime};

const BRENT_BATCH: u64 = 128;

/// True iff `n = 2^s` for some `s ≥ 0`.
pub fn is_power_of_two(n: &Natural) -> Result<bool, ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero("is_power_of_two"));
    }
    Ok(n.odd_part().is_one())
}

/// Least odd prime dividing `n`, or `None` when `n` is a power of two.
pub fn smallest_odd_prime_divisor_u64(n: u64) -> Result<Option<u64>, ArithError> {
    if n == 0 {
        return Err(ArithError::Zero("smallest_odd_prime_divisor"));
    }
    let m = n >> n.trailing_zeros();
    if m == 1 {
        return Ok(None);
    }
    for &p in &small_primes()[1..] {
        if p * p > m {
            return Ok(Some(m));
        }
        if m.is_multiple_of(p) {
            return Ok(Some(p));
        }
    }
    if is_prime_u64(m) {
        return Ok(Some(m));
    }
    Ok(factorize_u64(m).into_iter().min())
}

/// Least odd prime dividing `n`, or `None` when `n` is a power of two
/// (including `n = 1`). Zero is rejected.
pub fn smallest_odd_prime_divisor(n: &Natural) -> Result<Option<OddPrime>, ArithError> {
    if let Some(v) = n.as_u64() {
        return Ok(
            smallest_odd_prime_divisor_u64(v)?.map(|p| OddPrime::new_unchecked(Natural::from(p)))
        );
    }
    let m = n.odd_part();
    if m.is_one() {
        return Ok(None);
    }
    if let Some(v) = m.as_u64() {
        return smallest_odd_prime_divisor_u64(v)
            .map(|r| r.map(|p| OddPrime::new_unchecked(Natural::from(p))));
    }
    for &p in &small_primes()[1..] {
        if m.rem_u64(p) == 0 {
            return Ok(Some(OddPrime::new_unchecked(Natural::from(p))));
        }
    }
    let least = factorize(&m)?
        .into_iter()
        .min()
        .expect("odd part above one has a prime factor");
    Ok(Some(OddPrime::new_unchecked(least)))
}

/// True iff no prime `p < bound` divides `n`.
pub fn is_rough_u64(n: u64, bound: u64) -> bool {
    if n == 0 {
        return bound <= 2;
    }
    for &p in small_primes() {
        if p >= bound {
            return true;
        }
        if p * p > n {
            // n is 1 or a prime
            return n == 1 || n >= bound;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    factorize_u64(n)
        .into_iter()
        .min()
        .is_none_or(|p| p >= bound)
}

/// True iff no prime `p < bound` divides `n`.
pub fn is_rough(n: &Natural, bound: &Natural) -> bool {
    if let (Some(a), Some(b)) = (n.as_u64(), bound.as_u64()) {
        return is_rough_u64(a, b);
    }
    if n.is_zero() {
        return bound <= &Natural::from(2u64);
    }
    if n.is_one() {
        return true;
    }
    if bound > n {
        return false;
    }
    for &p in small_primes() {
        if Natural::from(p) >= *bound {
            return true;
        }
        if n.rem_u64(p) == 0 {
            return false;
        }
    }
    factorize(n)
        .expect("n is nonzero")
        .into_iter()
        .min()
        .is_none_or(|p| &p >= bound)
}

/// Prime factors of `n` with multiplicity, ascending. `1` has none.
pub fn factorize_u64(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut m = n;
    for &p in small_primes() {
        if p * p > m {
            break;
        }
        while m.is_multiple_of(p) {
            out.push(p);
            m /= p;
        }
    }
    if m > 1 {
        let mut rng = rand::rng();
        let mut pending = vec![m];
        while let Some(c) = pending.pop() {
            if c == 1 {
                continue;
            }
            if is_prime_u64(c) {
                out.push(c);
                continue;
            }
            let d = perfect_power_root(&BigUint::from(c))
                .and_then(|r| r.to_u64())
                .unwrap_or_else(|| brent_u64(c, &mut rng));
            pending.push(d);
            pending.push(c / d);
        }
    }
    out.sort_unstable();
    out
}

/// Prime factors of `n` with multiplicity, ascending. `1` has none; `0` is
/// rejected.
pub fn factorize(n: &Natural) -> Result<Vec<Natural>, ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero("factorize"));
    }
    if let Some(v) = n.as_u64() {
        return Ok(factorize_u64(v).into_iter().map(Natural::from).collect());
    }
    let mut out = Vec::new();
    let mut m = n.to_biguint();
    for &p in small_primes() {
        let big_p = BigUint::from(p);
        loop {
            let (q, r) = m.div_rem(&big_p);
            if !r.is_zero() {
                break;
            }
            out.push(Natural::from(p));
            m = q;
        }
    }
    let mut rng = rand::rng();
    let mut pending = vec![m];
    while let Some(c) = pending.pop() {
        let c_nat = Natural::from_biguint(c.clone());
        if c_nat.is_one() {
            continue;
        }
        if let Some(v) = c_nat.as_u64() {
            out.extend(factorize_u64(v).into_iter().map(Natural::from));
            continue;
        }
        if is_prime(&c_nat) {
            out.push(c_nat);
            continue;
        }
        let d = perfect_power_root(&c).unwrap_or_else(|| brent_big(&c, &mut rng));
        pending.push(&c / &d);
        pending.push(d);
    }
    out.sort_unstable();
    Ok(out)
}

/// `r` with `r^k = n` for some `k ≥ 2`, if any. Rho needs about `sqrt(p)`
/// steps to split `p^k`, so prime powers are peeled off first.
fn perfect_power_root(n: &BigUint) -> Option<BigUint> {
    // inputs have no prime factor below 2^16, so k ≤ bits / 16
    let max_k = (n.bits() / 16).max(2) as u32;
    (2..=max_k).find_map(|k| {
        let r = n.nth_root(k);
        (r.pow(k) == *n).then_some(r)
    })
}

/// A nontrivial factor of the odd composite `n`.
fn brent_u64<R: Rng + ?Sized>(n: u64, rng: &mut R) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let step =
        |x: u64, c: u64| ((u128::from(mul_mod(x, x, n)) + u128::from(c)) % u128::from(n)) as u64;
    loop {
        let c = random_below(rng, 1, n);
        let mut y = random_below(rng, 0, n);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y, c);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BRENT_BATCH.min(r - k) {
                    y = step(y, c);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BRENT_BATCH;
            }
            r *= 2;
        }
        if g == n {
            // the batched product overshot; walk back one step at a time
            loop {
                ys = step(ys, c);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
}

fn random_big<R: RngCore + ?Sized>(rng: &mut R, n: &BigUint) -> BigUint {
    let mut buf = vec![0u8; n.bits().div_ceil(8) as usize + 8];
    rng.fill_bytes(&mut buf);
    BigUint::from_bytes_le(&buf) % n
}

fn brent_big<R: RngCore + ?Sized>(n: &BigUint, rng: &mut R) -> BigUint {
    let one = BigUint::one();
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    loop {
        let c = random_big(rng, n);
        let step = |x: &BigUint| (x * x + &c) % n;
        let mut y = random_big(rng, n);
        let (mut g, mut r, mut q) = (one.clone(), 1u64, one.clone());
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..BRENT_BATCH.min(r - k) {
                    y = step(&y);
                    q = q * diff(&x, &y) % n;
                }
                g = q.gcd(n);
                k += BRENT_BATCH;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = step(&ys);
                g = diff(&x, &ys).gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    /// Least odd prime factor by raw trial division from 3 upward.
    fn trial_sopd(v: u64) -> Option<u64> {
        let mut m = v;
        while m.is_multiple_of(2) {
            m /= 2;
        }
        let mut d = 3;
        while d * d <= m {
            if m.is_multiple_of(d) {
                return Some(d);
            }
            d += 2;
        }
        (m > 1).then_some(m)
    }

    #[test]
    fn sopd_examples() {
        let sopd = |v| {
            smallest_odd_prime_divisor(&n(v))
                .unwrap()
                .map(|p| p.as_u64().unwrap())
        };
        assert_eq!(sopd(12), Some(3));
        assert_eq!(sopd(8), None);
        assert_eq!(sopd(1), None);
        assert_eq!(trial_sopd(406514), Some(439));
        assert_eq!(sopd(406514), Some(439));
        assert!(matches!(
            smallest_odd_prime_divisor(&Natural::ZERO),
            Err(ArithError::Zero(_))
        ));
    }

    #[test]
    fn power_of_two_examples() {
        assert!(is_power_of_two(&n(8)).unwrap());
        assert!(is_power_of_two(&n(1)).unwrap());
        assert!(!is_power_of_two(&n(12)).unwrap());
        assert!(is_power_of_two(&"1267650600228229401496703205376".parse().unwrap()).unwrap());
        assert!(is_power_of_two(&Natural::ZERO).is_err());
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize_u64(12), vec![2, 2, 3]);
        assert_eq!(factorize_u64(406514), vec![2, 439, 463]);
        assert!(factorize_u64(1).is_empty());
        assert!(factorize(&Natural::ONE).unwrap().is_empty());
        assert!(factorize(&Natural::ZERO).is_err());
    }

    #[test]
    fn rough_examples() {
        assert!(!is_rough_u64(926, 439));
        assert!(is_rough_u64(463, 439));
        assert!(is_rough_u64(1, 1_000_000));
        assert!(is_rough_u64(1, 0));
        assert!(!is_rough_u64(437, 439)); // 19 · 23
        assert!(!is_rough_u64(433, 439)); // prime below the bound
    }

    #[test]
    fn beyond_trial_cutoff() {
        // two primes above 2^16
        let (p, q) = (4294967291u64, 4294967279u64);
        assert_eq!(factorize_u64(p * q), vec![q, p]);
        assert_eq!(
            smallest_odd_prime_divisor_u64(4 * 65537 * 65539).unwrap(),
            Some(65537)
        );
        assert_eq!(
            smallest_odd_prime_divisor_u64(2 * 2147483629 * 2147483647).unwrap(),
            Some(2147483629)
        );
        assert!(is_rough_u64(p * q, 1 << 20));
        assert!(!is_rough_u64(p * q, q + 1));
        // square of a prime above the cutoff
        assert_eq!(factorize_u64(65537 * 65537 * 3), vec![3, 65537, 65537]);
    }

    #[test]
    fn big_factorization() {
        let p61 = n(2305843009213693951);
        let p31 = n(2147483647);
        let v = &(&p61 * &p31) * 6u64;
        let fs = factorize(&v).unwrap();
        assert_eq!(fs, vec![n(2), n(3), p31.clone(), p61.clone()]);
        let sopd = smallest_odd_prime_divisor(&(&(&p61 * &p31) * 16u64)).unwrap();
        assert_eq!(sopd.unwrap().value(), &p31);
        let semi = &p61 * &p61;
        assert_eq!(factorize(&semi).unwrap(), vec![p61.clone(), p61.clone()]);
        assert!(is_rough(&semi, &p61));
        assert!(!is_rough(&semi, &(&p61 + 1u64)));
    }

    #[test]
    fn sopd_matches_trial_division() {
        for v in 1..100_000u64 {
            let got = smallest_odd_prime_divisor_u64(v).unwrap();
            assert_eq!(got, trial_sopd(v), "v = {v}");
            assert_eq!(got.is_none(), is_power_of_two(&n(v)).unwrap());
        }
    }

    #[test]
    fn factorization_is_consistent() {
        for v in 1..100_000u64 {
            let fs = factorize_u64(v);
            assert_eq!(fs.iter().product::<u64>(), v);
            assert!(fs.iter().all(|&p| is_prime_u64(p)));
            let least_odd = fs.iter().copied().find(|&p| p > 2);
            assert_eq!(least_odd, smallest_odd_prime_divisor_u64(v).unwrap());
            for b in [2u64, 3, 7, 100, 317] {
                assert_eq!(
                    is_rough_u64(v, b),
                    fs.iter().all(|&p| p >= b),
                    "v={v} b={b}"
                );
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn factorize_product_identity(v in 1u64..) {
            let fs = factorize_u64(v);
            proptest::prop_assert_eq!(fs.iter().map(|&p| u128::from(p)).product::<u128>(), u128::from(v));
            proptest::prop_assert!(fs.iter().all(|&p| is_prime_u64(p)));
        }
    }
}
