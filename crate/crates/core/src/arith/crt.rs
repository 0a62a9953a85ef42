use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::natural::Natural;
use super::ArithError;

/// A solved system of simultaneous congruences over pairwise coprime moduli.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtSystem {
    /// `(residue, modulus)` pairs, residues reduced into `[0, modulus)`.
    pub congruences: Vec<(Natural, Natural)>,
    pub combined_modulus: Natural,
    /// The unique solution in `[0, combined_modulus)`.
    pub solution: Natural,
}

impl CrtSystem {
    /// True iff `x` satisfies every congruence.
    pub fn is_satisfied_by(&self, x: &Natural) -> bool {
        self.congruences.iter().all(|(r, m)| &(x % m) == r)
    }
}

fn to_bigint(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let eg = a.extended_gcd(m);
    eg.gcd.is_one().then(|| eg.x.mod_floor(m))
}

/// Solves `x ≡ residue (mod modulus)` for every pair. Moduli must be at least
/// 2 and pairwise coprime; residues are reduced on input.
pub fn crt_solve(congruences: &[(Natural, Natural)]) -> Result<CrtSystem, ArithError> {
    if congruences.is_empty() {
        return Err(ArithError::EmptySystem);
    }
    for (_, m) in congruences {
        if m < &Natural::from(2u64) {
            return Err(ArithError::BadModulus(m.clone()));
        }
    }
    for (i, (_, a)) in congruences.iter().enumerate() {
        for (_, b) in &congruences[i + 1..] {
            let g = a.gcd(b);
            if !g.is_one() {
                return Err(ArithError::NotCoprime {
                    a: a.clone(),
                    b: b.clone(),
                    gcd: g,
                });
            }
        }
    }

    let reduced: Vec<(Natural, Natural)> = congruences
        .iter()
        .map(|(r, m)| (r % m, m.clone()))
        .collect();

    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r, m) in &reduced {
        let r = to_bigint(&r.to_biguint());
        let m = to_bigint(&m.to_biguint());
        let inv = inverse_mod(&modulus.mod_floor(&m), &m).expect("moduli checked coprime");
        let t = ((&r - &x).mod_floor(&m) * inv).mod_floor(&m);
        x += &modulus * t;
        modulus *= &m;
    }

    let (_, solution) = x.into_parts();
    let (_, combined) = modulus.into_parts();
    Ok(CrtSystem {
        congruences: reduced,
        combined_modulus: Natural::from_biguint(combined),
        solution: Natural::from_biguint(solution),
    })
}
