//! Sequence constructions: forward generation, left extension (CRT and
//! minimal), reversed generation, progression-based long sequences and
//! growth diagnostics.

mod forward;
mod green_tao;
mod growth;
mod left;
mod reversed;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ArithError, Natural, OddPrime};
use crate::searchctl::SearchError;

pub use forward::generate_forward;
pub use green_tao::{find_prime_ap, green_tao_sequence, index_recurrence, PrimeAp};
pub use growth::{growth_diagnostics, growth_root, GrowthReport, TripleCheck};
pub use left::{
    extend_left_crt, extend_left_minimal, extend_left_naive, left_extension_congruences,
    CrtExtension, Extension, DEFAULT_CRT_STEPS,
};
pub use reversed::{generate_reversed, ReversedGenerator, StepStrategy, DELEGATE_ABOVE};

pub(crate) use left::{first_multiplier, last_multiplier};

#[derive(Debug, Error)]
pub enum SeqError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("{0} appears twice; left extension needs distinct primes")]
    EqualPrimes(OddPrime),
    #[error("max_terms must be at least 2, got {0}")]
    TooFewTerms(usize),
    #[error("no odd prime among the first {steps} progression terms")]
    BoundExhausted { steps: u64 },
    #[error("CRT solution shares the factor {gcd} with its modulus")]
    Degenerate { gcd: Natural },
    #[error("internal check failed: {0}")]
    Postcondition(String),
    #[error("k must be in 3..=65, got {0}")]
    KOutOfRange(u32),
    #[error("progression length must be {expected}, got {got}")]
    ApLength { expected: u64, got: usize },
    #[error("invalid prime progression: {0}")]
    InvalidAp(String),
    #[error("term {index} is {got}, expected progression term {expected}")]
    ApMismatch {
        index: usize,
        expected: Natural,
        got: Natural,
    },
    #[error("need at least {needed} terms, got {got}")]
    NotEnoughTerms { needed: usize, got: usize },
}

/// An ordered pair of odd primes that starts a sequence. The two primes may
/// be equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub p1: OddPrime,
    pub p2: OddPrime,
}

impl Seed {
    pub fn new(p1: OddPrime, p2: OddPrime) -> Self {
        Seed { p1, p2 }
    }

    pub fn from_u64(p1: u64, p2: u64) -> Result<Self, ArithError> {
        Ok(Seed {
            p1: OddPrime::from_u64(p1)?,
            p2: OddPrime::from_u64(p2)?,
        })
    }
}

/// How a forward sequence ended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ForwardStatus {
    /// The last two terms sum to the power of two `final_sum`.
    Terminated { final_sum: Natural },
    /// Two equal consecutive terms; the sequence repeats them forever.
    Constant,
    /// Stopped at `limit` terms without terminating.
    Truncated { limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfibSequence {
    pub terms: Vec<OddPrime>,
    pub status: ForwardStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ReversedStatus {
    Complete,
    /// No term with index `at_index` (0-based) exists at or below `bound`.
    BoundExhausted {
        at_index: usize,
        bound: Natural,
    },
    /// The search for term `at_index` was cancelled.
    Interrupted {
        at_index: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReversedSequence {
    pub terms: Vec<OddPrime>,
    pub status: ReversedStatus,
}
