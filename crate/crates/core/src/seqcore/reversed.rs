use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::arith::{Natural, OddPrime};
use crate::searchctl::{
    self, load_checkpoint, Checkpoint, SearchOptions, SearchOutcome, SearchTask,
};

use super::left::{extend_left_minimal, extend_left_naive, Extension};
use super::{ReversedSequence, ReversedStatus, Seed, SeqError};

/// Per-step bounds above this go through the parallel search controller.
pub const DELEGATE_ABOVE: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepStrategy {
    /// Roughness-filtered multiplier enumeration.
    Structured,
    /// Scan every odd prime up to the bound. Slow; used for cross-checks.
    Naive,
}

/// Configurable reversed-sequence generation.
///
/// Each step runs on the calling thread unless the bound exceeds
/// `delegate_above` or a checkpoint file is set, in which case it goes
/// through [`searchctl`] with `workers` threads. Both paths return the same
/// terms.
#[derive(Debug, Clone)]
pub struct ReversedGenerator {
    pub per_step_bound: Natural,
    pub workers: usize,
    pub delegate_above: Natural,
    pub strategy: StepStrategy,
    /// Progress of the current step is saved here. If the file already holds
    /// a checkpoint for one of the steps, that step resumes from it.
    pub checkpoint: Option<PathBuf>,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl ReversedGenerator {
    pub fn new(per_step_bound: Natural) -> Self {
        ReversedGenerator {
            per_step_bound,
            workers: searchctl::default_workers(),
            delegate_above: Natural::from(DELEGATE_ABOVE),
            strategy: StepStrategy::Structured,
            checkpoint: None,
            cancel: None,
        }
    }

    fn cancelled(&self) -> bool {
        self.cancel
            .as_ref()
            .is_some_and(|c| c.load(Ordering::Relaxed))
    }

    /// Generates up to `num_terms` terms, calling `on_term(index, term)` for
    /// each one (seed included) as soon as it is known.
    pub fn run<F>(
        &self,
        seed: &Seed,
        num_terms: usize,
        mut on_term: F,
    ) -> Result<ReversedSequence, SeqError>
    where
        F: FnMut(usize, &OddPrime),
    {
        if num_terms < 2 {
            return Err(SeqError::TooFewTerms(num_terms));
        }
        let mut pending = match &self.checkpoint {
            Some(path) if path.exists() => Some(load_checkpoint(path)?),
            _ => None,
        };
        let mut terms = vec![seed.p1.clone(), seed.p2.clone()];
        on_term(0, &terms[0]);
        on_term(1, &terms[1]);
        while terms.len() < num_terms {
            let at_index = terms.len();
            if self.cancelled() {
                return Ok(ReversedSequence {
                    terms,
                    status: ReversedStatus::Interrupted { at_index },
                });
            }
            let constraint = &terms[at_index - 2];
            let partner = &terms[at_index - 1];
            match self.step(constraint, partner, &mut pending)? {
                Some(Extension::Found(r)) => {
                    on_term(at_index, &r);
                    terms.push(r);
                }
                Some(Extension::Exhausted) => {
                    return Ok(ReversedSequence {
                        terms,
                        status: ReversedStatus::BoundExhausted {
                            at_index,
                            bound: self.per_step_bound.clone(),
                        },
                    });
                }
                None => {
                    return Ok(ReversedSequence {
                        terms,
                        status: ReversedStatus::Interrupted { at_index },
                    });
                }
            }
        }
        Ok(ReversedSequence {
            terms,
            status: ReversedStatus::Complete,
        })
    }

    /// `None` means the step was interrupted.
    fn step(
        &self,
        constraint: &OddPrime,
        partner: &OddPrime,
        pending: &mut Option<Checkpoint>,
    ) -> Result<Option<Extension>, SeqError> {
        let bound = &self.per_step_bound;
        // p + r ≥ c is needed for c to divide p + r
        if constraint.value() > partner.value() && bound < &(constraint.value() - partner.value()) {
            return Ok(Some(Extension::Exhausted));
        }
        if self.strategy == StepStrategy::Naive {
            return Ok(Some(extend_left_naive(partner, constraint, bound)));
        }
        let small = constraint.as_u64().is_some() && partner.as_u64().is_some();
        if !small || (bound <= &self.delegate_above && self.checkpoint.is_none()) {
            return Ok(Some(extend_left_minimal(partner, constraint, bound)));
        }

        let task = SearchTask::new(constraint.clone(), partner.clone(), bound.clone());
        let mut opts = SearchOptions::with_workers(self.workers);
        opts.cancel = self.cancel.clone();
        let resume = match pending.take() {
            Some(cp) if cp.task == task => {
                opts.checkpoint_path = self.checkpoint.clone();
                Some(cp)
            }
            // keep the on-disk checkpoint until the step it belongs to
            Some(cp) => {
                *pending = Some(cp);
                None
            }
            None => {
                opts.checkpoint_path = self.checkpoint.clone();
                None
            }
        };
        let report = searchctl::run_search_with(&task, resume.as_ref(), &opts)?;
        Ok(match report.outcome {
            SearchOutcome::Found(r) => Some(Extension::Found(r)),
            SearchOutcome::Exhausted => Some(Extension::Exhausted),
            SearchOutcome::Interrupted => None,
        })
    }
}

/// The reversed sequence seeded by `seed`: each new term is the least odd
/// prime `r ≤ per_step_bound` such that the term two places back is the
/// smallest odd prime divisor of `r` plus the previous term.
pub fn generate_reversed(
    seed: &Seed,
    num_terms: usize,
    per_step_bound: &Natural,
) -> Result<ReversedSequence, SeqError> {
    ReversedGenerator::new(per_step_bound.clone()).run(seed, num_terms, |_, _| {})
}
