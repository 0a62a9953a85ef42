use crate::arith::{is_power_of_two, smallest_odd_prime_divisor};

use super::{ForwardStatus, PfibSequence, Seed, SeqError};

/// Runs the forward recurrence from `seed`.
///
/// Each new term is the smallest odd prime divisor of the sum of the two
/// before it. Generation stops when that sum is a power of two, when two
/// consecutive terms are equal (the sequence is then constant), or after
/// `max_terms` terms.
pub fn generate_forward(seed: &Seed, max_terms: usize) -> Result<PfibSequence, SeqError> {
    if max_terms < 2 {
        return Err(SeqError::TooFewTerms(max_terms));
    }
    let mut terms = vec![seed.p1.clone(), seed.p2.clone()];
    loop {
        let (a, b) = (&terms[terms.len() - 2], &terms[terms.len() - 1]);
        if a == b {
            return Ok(PfibSequence {
                terms,
                status: ForwardStatus::Constant,
            });
        }
        let sum = a.value() + b.value();
        if is_power_of_two(&sum)? {
            return Ok(PfibSequence {
                terms,
                status: ForwardStatus::Terminated { final_sum: sum },
            });
        }
        if terms.len() >= max_terms {
            return Ok(PfibSequence {
                terms,
                status: ForwardStatus::Truncated { limit: max_terms },
            });
        }
        let next = smallest_odd_prime_divisor(&sum)?.expect("sum is not a power of two");
        terms.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{sieve_primes, Natural, OddPrime};

    fn values(seq: &PfibSequence) -> Vec<u64> {
        seq.terms.iter().map(|p| p.as_u64().unwrap()).collect()
    }

    fn run(a: u64, b: u64) -> PfibSequence {
        generate_forward(&Seed::from_u64(a, b).unwrap(), 100).unwrap()
    }

    #[test]
    fn examples() {
        let s = run(5, 7);
        assert_eq!(values(&s), vec![5, 7, 3, 5]);
        assert_eq!(
            s.status,
            ForwardStatus::Terminated {
                final_sum: Natural::from(8u64)
            }
        );

        let s = run(3, 3);
        assert_eq!(values(&s), vec![3, 3]);
        assert_eq!(s.status, ForwardStatus::Constant);

        let s = run(3, 5);
        assert_eq!(values(&s), vec![3, 5]);
        assert!(matches!(s.status, ForwardStatus::Terminated { .. }));

        assert_eq!(values(&run(5, 29)), vec![5, 29, 17, 23, 5, 7, 3, 5]);
    }

    #[test]
    fn truncation_and_precondition() {
        let seed = Seed::from_u64(5, 29).unwrap();
        let s = generate_forward(&seed, 3).unwrap();
        assert_eq!(values(&s), vec![5, 29, 17]);
        assert_eq!(s.status, ForwardStatus::Truncated { limit: 3 });
        // the terminating check wins over the length cap
        let s = generate_forward(&Seed::from_u64(5, 7).unwrap(), 4).unwrap();
        assert!(matches!(s.status, ForwardStatus::Terminated { .. }));
        assert!(matches!(
            generate_forward(&seed, 1),
            Err(SeqError::TooFewTerms(1))
        ));
    }

    #[test]
    fn big_seed() {
        // (2^89 - 1) + 3 = 2 (2^88 + 1), and 257 = 2^8 + 1 is its least odd factor
        let p: Natural = "618970019642690137449562111".parse().unwrap();
        let seed = Seed::new(OddPrime::new(p).unwrap(), OddPrime::from_u64(3).unwrap());
        let s = generate_forward(&seed, 1000).unwrap();
        assert_eq!(s.terms[2].as_u64(), Some(257));
        assert!(matches!(s.status, ForwardStatus::Terminated { .. }));
    }

    #[test]
    fn every_step_follows_the_recurrence() {
        let primes: Vec<u64> = sieve_primes(200).unwrap().into_iter().skip(1).collect();
        for &a in &primes {
            for &b in &primes {
                let s = run(a, b);
                let v = values(&s);
                for w in v.windows(3) {
                    let mut sum = w[0] + w[1];
                    while sum % 2 == 0 {
                        sum /= 2;
                    }
                    let least = (3..=sum).step_by(2).find(|d| sum % d == 0).unwrap();
                    assert_eq!(w[2], least);
                }
                if a != b {
                    let last = v.len() - 1;
                    assert!((v[last - 1] + v[last]).is_power_of_two());
                }
            }
        }
    }
}
