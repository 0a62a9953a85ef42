//! Prime Fibonacci sequences.
//!
//! A prime Fibonacci sequence starts from two odd primes and continues with
//! the smallest odd prime divisor of the sum of the previous two terms,
//! stopping once that sum is a power of two. This crate generates such
//! sequences, extends them to the left (by a Chinese-remainder construction
//! or by a minimal search), runs the minimal left extension repeatedly as a
//! "reversed" sequence with a parallel, checkpointed search, and builds long
//! sequences from arithmetic progressions of primes.

pub mod arith;
pub mod searchctl;
pub mod seqcore;
