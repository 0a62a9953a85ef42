//! Unbounded nonnegative integers with a fixed-width fast path.
//!
//! Values that fit in a `u64` are stored inline and every operation on two
//! such values stays in machine arithmetic unless it overflows. Anything
//! larger is held as a [`BigUint`]. The representation is normalized: a
//! `Big` value is always greater than `u64::MAX`, so derived equality and
//! ordering are correct.

use std::fmt;
use std::ops::{Add, Div, Mul, Rem, Sub};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Repr {
    Small(u64),
    Big(BigUint),
}

/// A nonnegative integer of any size.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Natural(Repr);

impl Natural {
    pub const ZERO: Natural = Natural(Repr::Small(0));
    pub const ONE: Natural = Natural(Repr::Small(1));

    pub fn from_biguint(n: BigUint) -> Self {
        match n.to_u64() {
            Some(v) => Natural(Repr::Small(v)),
            None => Natural(Repr::Big(n)),
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match &self.0 {
            Repr::Small(v) => BigUint::from(*v),
            Repr::Big(b) => b.clone(),
        }
    }

    /// The value as a `u64`, if it fits.
    pub fn as_u64(&self) -> Option<u64> {
        match self.0 {
            Repr::Small(v) => Some(v),
            Repr::Big(_) => None,
        }
    }

    pub fn is_small(&self) -> bool {
        matches!(self.0, Repr::Small(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1))
    }

    pub fn is_even(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => v % 2 == 0,
            Repr::Big(b) => b.is_even(),
        }
    }

    pub fn is_odd(&self) -> bool {
        !self.is_even()
    }

    /// Number of significant bits; zero for zero.
    pub fn bits(&self) -> u64 {
        match &self.0 {
            Repr::Small(v) => 64 - u64::from(v.leading_zeros()),
            Repr::Big(b) => b.bits(),
        }
    }

    /// Exponent of the largest power of two dividing `self`. `None` for zero.
    pub fn trailing_zeros(&self) -> Option<u64> {
        match &self.0 {
            Repr::Small(0) => None,
            Repr::Small(v) => Some(u64::from(v.trailing_zeros())),
            Repr::Big(b) => b.trailing_zeros(),
        }
    }

    pub fn shr(&self, bits: u64) -> Natural {
        match &self.0 {
            Repr::Small(v) => Natural::from(if bits >= 64 { 0 } else { v >> bits }),
            Repr::Big(b) => Natural::from_biguint(b >> bits),
        }
    }

    /// `self` with all factors of two removed. Zero maps to zero.
    pub fn odd_part(&self) -> Natural {
        match self.trailing_zeros() {
            Some(tz) => self.shr(tz),
            None => Natural::ZERO,
        }
    }

    pub fn rem_u64(&self, m: u64) -> u64 {
        match &self.0 {
            Repr::Small(v) => v % m,
            Repr::Big(b) => (b % m).to_u64().expect("remainder below u64 modulus"),
        }
    }

    pub fn checked_sub(&self, rhs: &Natural) -> Option<Natural> {
        if self < rhs {
            return None;
        }
        Some(match (&self.0, &rhs.0) {
            (Repr::Small(a), Repr::Small(b)) => Natural::from(a - b),
            _ => Natural::from_biguint(self.to_biguint() - rhs.to_biguint()),
        })
    }

    pub fn div_rem(&self, rhs: &Natural) -> (Natural, Natural) {
        assert!(!rhs.is_zero(), "division by zero");
        match (&self.0, &rhs.0) {
            (Repr::Small(a), Repr::Small(b)) => (Natural::from(a / b), Natural::from(a % b)),
            _ => {
                let (q, r) = self.to_biguint().div_rem(&rhs.to_biguint());
                (Natural::from_biguint(q), Natural::from_biguint(r))
            }
        }
    }

    pub fn gcd(&self, rhs: &Natural) -> Natural {
        match (&self.0, &rhs.0) {
            (Repr::Small(a), Repr::Small(b)) => Natural::from(a.gcd(b)),
            _ => Natural::from_biguint(self.to_biguint().gcd(&rhs.to_biguint())),
        }
    }

    pub fn divides(&self, n: &Natural) -> bool {
        if self.is_zero() {
            return n.is_zero();
        }
        (n % self).is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(v) => *v as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::INFINITY),
        }
    }
}

impl Default for Natural {
    fn default() -> Self {
        Natural::ZERO
    }
}

impl From<u64> for Natural {
    fn from(v: u64) -> Self {
        Natural(Repr::Small(v))
    }
}

impl From<u32> for Natural {
    fn from(v: u32) -> Self {
        Natural(Repr::Small(u64::from(v)))
    }
}

impl From<u128> for Natural {
    fn from(v: u128) -> Self {
        match u64::try_from(v) {
            Ok(s) => Natural(Repr::Small(s)),
            Err(_) => Natural(Repr::Big(BigUint::from(v))),
        }
    }
}

impl From<BigUint> for Natural {
    fn from(v: BigUint) -> Self {
        Natural::from_biguint(v)
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => fmt::Display::fmt(v, f),
            Repr::Big(b) => fmt::Display::fmt(b, f),
        }
    }
}

impl fmt::Debug for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error returned when a string is not a plain decimal natural number.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid natural number {0:?}")]
pub struct ParseNaturalError(pub String);

impl FromStr for Natural {
    type Err = ParseNaturalError;

    /// Accepts decimal digits only. Underscore separators are allowed between
    /// digits (`2_000_000_000`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseNaturalError(s.to_string());
        if s.is_empty() || s.starts_with('_') || s.ends_with('_') || s.contains("__") {
            return Err(err());
        }
        let digits: String = s.chars().filter(|&c| c != '_').collect();
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        if let Ok(v) = digits.parse::<u64>() {
            return Ok(Natural::from(v));
        }
        BigUint::parse_bytes(digits.as_bytes(), 10)
            .map(Natural::from_biguint)
            .ok_or_else(err)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Natural> for Natural {
            type Output = Natural;
            fn $method(self, rhs: Natural) -> Natural {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Natural> for Natural {
            type Output = Natural;
            fn $method(self, rhs: &Natural) -> Natural {
                (&self).$method(rhs)
            }
        }
        impl $trait<Natural> for &Natural {
            type Output = Natural;
            fn $method(self, rhs: Natural) -> Natural {
                self.$method(&rhs)
            }
        }
        impl $trait<u64> for &Natural {
            type Output = Natural;
            fn $method(self, rhs: u64) -> Natural {
                self.$method(&Natural::from(rhs))
            }
        }
        impl $trait<u64> for Natural {
            type Output = Natural;
            fn $method(self, rhs: u64) -> Natural {
                (&self).$method(&Natural::from(rhs))
            }
        }
    };
}

impl Add<&Natural> for &Natural {
    type Output = Natural;
    fn add(self, rhs: &Natural) -> Natural {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(s) = a.checked_add(*b) {
                return Natural::from(s);
            }
        }
        Natural::from_biguint(self.to_biguint() + rhs.to_biguint())
    }
}

impl Mul<&Natural> for &Natural {
    type Output = Natural;
    fn mul(self, rhs: &Natural) -> Natural {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            return Natural::from(u128::from(*a) * u128::from(*b));
        }
        Natural::from_biguint(self.to_biguint() * rhs.to_biguint())
    }
}

impl Sub<&Natural> for &Natural {
    type Output = Natural;
    fn sub(self, rhs: &Natural) -> Natural {
        self.checked_sub(rhs)
            .expect("Natural subtraction underflow")
    }
}

impl Div<&Natural> for &Natural {
    type Output = Natural;
    fn div(self, rhs: &Natural) -> Natural {
        self.div_rem(rhs).0
    }
}

impl Rem<&Natural> for &Natural {
    type Output = Natural;
    fn rem(self, rhs: &Natural) -> Natural {
        self.div_rem(rhs).1
    }
}

forward_binop!(Add, add);
forward_binop!(Mul, mul);
forward_binop!(Sub, sub);
forward_binop!(Div, div);
forward_binop!(Rem, rem);

impl std::iter::Product for Natural {
    fn product<I: Iterator<Item = Natural>>(iter: I) -> Self {
        iter.fold(Natural::ONE, |acc, x| acc * x)
    }
}

impl<'a> std::iter::Product<&'a Natural> for Natural {
    fn product<I: Iterator<Item = &'a Natural>>(iter: I) -> Self {
        iter.fold(Natural::ONE, |acc, x| acc * x)
    }
}

impl std::iter::Sum for Natural {
    fn sum<I: Iterator<Item = Natural>>(iter: I) -> Self {
        iter.fold(Natural::ZERO, |acc, x| acc + x)
    }
}

// Values below 2^64 serialize as plain integers; larger ones as decimal strings.
impl Serialize for Natural {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match &self.0 {
            Repr::Small(v) => serializer.serialize_u64(*v),
            Repr::Big(b) => serializer.serialize_str(&b.to_string()),
        }
    }
}

struct NaturalVisitor;

impl Visitor<'_> for NaturalVisitor {
    type Value = Natural;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a nonnegative integer or a string of decimal digits")
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Natural, E> {
        Ok(Natural::from(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Natural, E> {
        u64::try_from(v)
            .map(Natural::from)
            .map_err(|_| E::custom(format!("negative value {v}")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Natural, E> {
        if v.contains('_') {
            return Err(E::custom(format!("invalid natural number {v:?}")));
        }
        v.parse().map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Natural {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(NaturalVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(s: &str) -> Natural {
        s.parse().unwrap()
    }

    #[test]
    fn normalization_keeps_small_values_inline() {
        let n = Natural::from_biguint(BigUint::from(17u32));
        assert!(n.is_small());
        let m = big("18446744073709551616"); // 2^64
        assert!(!m.is_small());
        assert_eq!((&m - &Natural::ONE).as_u64(), Some(u64::MAX));
    }

    #[test]
    fn ordering_crosses_representations() {
        assert!(Natural::from(u64::MAX) < big("18446744073709551616"));
        assert!(big("100000000000000000000000") > big("18446744073709551616"));
    }

    #[test]
    fn overflow_promotes() {
        let a = Natural::from(u64::MAX);
        let s = &a + &Natural::ONE;
        assert_eq!(s.to_string(), "18446744073709551616");
        let p = &a * &a;
        assert_eq!(p.to_string(), "340282366920938463426481119284349108225");
    }

    #[test]
    fn parse_accepts_underscores() {
        assert_eq!(big("2_000_000_000"), Natural::from(2_000_000_000u64));
        assert!("2__0".parse::<Natural>().is_err());
        assert!("_2".parse::<Natural>().is_err());
        assert!("-3".parse::<Natural>().is_err());
        assert!("1e9".parse::<Natural>().is_err());
        assert!("".parse::<Natural>().is_err());
    }

    #[test]
    fn odd_part_and_trailing_zeros() {
        assert_eq!(Natural::from(926u64).odd_part(), Natural::from(463u64));
        assert_eq!(Natural::from(4096u64).trailing_zeros(), Some(12));
        assert_eq!(Natural::ZERO.trailing_zeros(), None);
        let b = big("36893488147419103232"); // 2^65
        assert_eq!(b.trailing_zeros(), Some(65));
        assert!(b.odd_part().is_one());
    }

    #[test]
    fn serde_uses_numbers_then_strings() {
        let small = serde_json::to_string(&Natural::from(406507u64)).unwrap();
        assert_eq!(small, "406507");
        let large = serde_json::to_string(&big("18446744073709551617")).unwrap();
        assert_eq!(large, "\"18446744073709551617\"");
        let back: Natural = serde_json::from_str(&large).unwrap();
        assert_eq!(back, big("18446744073709551617"));
        assert!(serde_json::from_str::<Natural>("-1").is_err());
        assert!(serde_json::from_str::<Natural>("1.5").is_err());
    }

    proptest! {
        #[test]
        fn arithmetic_matches_biguint(a in any::<u128>(), b in 1u128..) {
            let (na, nb) = (Natural::from(a), Natural::from(b));
            let (ba, bb) = (BigUint::from(a), BigUint::from(b));
            prop_assert_eq!((&na + &nb).to_biguint(), &ba + &bb);
            prop_assert_eq!((&na * &nb).to_biguint(), &ba * &bb);
            prop_assert_eq!((&na / &nb).to_biguint(), &ba / &bb);
            prop_assert_eq!((&na % &nb).to_biguint(), &ba % &bb);
            prop_assert_eq!(na.gcd(&nb).to_biguint(), ba.gcd(&bb));
            prop_assert_eq!(na.cmp(&nb), ba.cmp(&bb));
            prop_assert_eq!(na.to_string().parse::<Natural>().unwrap(), na);
        }
    }
}
