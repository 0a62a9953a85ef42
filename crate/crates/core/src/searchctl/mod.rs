//! Parallel, bounded, checkpointed search for one minimal left-extension
//! step.
//!
//! The even multipliers `m` of a [`SearchTask`] are split into contiguous
//! shards of `shard_width` values. Workers pull shards in increasing order,
//! sieve out every `m` whose odd part has a prime factor below the
//! constraint prime, and test the surviving candidates
//! `constraint * m - partner` for primality. A shard's hit only becomes the
//! answer once every lower shard has reported, so the result is the global
//! minimum regardless of how many workers run or in which order they finish.
//!
//! The coordinator owns the [`Checkpoint`]: it advances `next_multiplier`
//! over the completed prefix of shards and persists it after each shard and
//! on a timer.

mod checkpoint;
mod shard;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{mpsc, Arc};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{Natural, OddPrime};
use crate::seqcore::{first_multiplier, last_multiplier};

pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint, FORMAT_VERSION};
use shard::ShardScanner;

/// Multipliers per shard unless the task says otherwise.
pub const DEFAULT_SHARD_WIDTH: u64 = 1 << 16;

/// Time-based checkpoint cadence on top of the per-shard writes.
pub const CHECKPOINT_INTERVAL: Duration = Duration::from_secs(30);

const POLL: Duration = Duration::from_millis(50);

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search task: {0}")]
    InvalidTask(String),
    #[error("checkpoint belongs to a different task")]
    TaskMismatch,
    #[error("corrupted checkpoint: {0}")]
    Corrupt(String),
    #[error("checkpoint I/O on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unsupported task: {0}")]
    Unsupported(String),
    #[error("search coordinator lost shard {0}")]
    LostShard(u64),
}

/// Find the least odd prime `r ≤ bound` such that `constraint_prime` is the
/// smallest odd prime divisor of `partner + r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchTask {
    pub constraint_prime: OddPrime,
    pub partner: OddPrime,
    pub bound: Natural,
    pub shard_width: u64,
}

impl SearchTask {
    pub fn new(constraint_prime: OddPrime, partner: OddPrime, bound: Natural) -> Self {
        SearchTask {
            constraint_prime,
            partner,
            bound,
            shard_width: DEFAULT_SHARD_WIDTH,
        }
    }

    pub fn with_shard_width(mut self, shard_width: u64) -> Self {
        self.shard_width = shard_width;
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.shard_width == 0 {
            return Err(SearchError::InvalidTask("shard_width must be ≥ 1".into()));
        }
        let (c, p) = (self.constraint_prime.value(), self.partner.value());
        if c > p && self.bound < c - p {
            return Err(SearchError::InvalidTask(format!(
                "bound {} is below constraint_prime - partner = {}",
                self.bound,
                c - p
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchOutcome {
    Found(OddPrime),
    /// Every candidate up to the bound was ruled out.
    Exhausted,
    /// Stopped by cancellation or a shard budget before finishing.
    Interrupted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub checkpoint: Checkpoint,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub workers: usize,
    /// Persist the checkpoint here after every shard and on the timer.
    pub checkpoint_path: Option<PathBuf>,
    pub checkpoint_interval: Duration,
    /// Set to request an early stop; a final checkpoint is still written.
    pub cancel: Option<Arc<AtomicBool>>,
    /// Stop after this many shards complete in this run.
    pub max_shards: Option<u64>,
}

impl SearchOptions {
    pub fn with_workers(workers: usize) -> Self {
        SearchOptions {
            workers,
            checkpoint_path: None,
            checkpoint_interval: CHECKPOINT_INTERVAL,
            cancel: None,
            max_shards: None,
        }
    }
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self::with_workers(default_workers())
    }
}

/// `PFIB_WORKERS` if set to a positive integer, else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var("PFIB_WORKERS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
}

pub fn run_search(
    task: &SearchTask,
    resume_from: Option<&Checkpoint>,
    workers: usize,
) -> Result<SearchReport, SearchError> {
    run_search_with(task, resume_from, &SearchOptions::with_workers(workers))
}

fn next_even_after(m: u64) -> Natural {
    let n = u128::from(m) + 1;
    Natural::from(n + (n & 1))
}

struct Shards {
    first: u64,
    last: u64,
    width: u64,
    count: u64,
}

impl Shards {
    /// Shard `j` holds `width` consecutive even multipliers.
    fn range(&self, j: u64) -> (u64, u64) {
        let span = 2 * u128::from(self.width);
        let lo = u128::from(self.first) + u128::from(j) * span;
        let hi = (lo + span - 2).min(u128::from(self.last));
        (lo as u64, hi as u64)
    }
}

pub fn run_search_with(
    task: &SearchTask,
    resume_from: Option<&Checkpoint>,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    task.validate()?;
    let started = Instant::now();
    let mut cp = match resume_from {
        Some(cp) => {
            if &cp.task != task {
                return Err(SearchError::TaskMismatch);
            }
            cp.validate()?;
            cp.clone()
        }
        None => Checkpoint::fresh(task.clone()),
    };
    let base_wall = cp.wall_seconds;
    let persist = |cp: &mut Checkpoint| -> Result<(), SearchError> {
        cp.wall_seconds = base_wall + started.elapsed().as_secs_f64();
        match &opts.checkpoint_path {
            Some(path) => save_checkpoint(cp, path),
            None => Ok(()),
        }
    };

    if let Some(best) = cp.best_found.clone() {
        return Ok(SearchReport {
            outcome: SearchOutcome::Found(best),
            checkpoint: cp,
        });
    }

    let (Some(constraint), Some(partner)) = (task.constraint_prime.as_u64(), task.partner.as_u64())
    else {
        return Err(SearchError::Unsupported(
            "constraint and partner must be below 2^64".into(),
        ));
    };
    let m_last = last_multiplier(constraint, partner, &task.bound);
    let m_first = match cp.next_multiplier.as_u64() {
        Some(next) => next.max(first_multiplier(constraint, partner)),
        None => u64::MAX,
    };
    if m_first > m_last {
        cp.next_multiplier = cp.next_multiplier.clone().max(next_even_after(m_last));
        persist(&mut cp)?;
        return Ok(SearchReport {
            outcome: SearchOutcome::Exhausted,
            checkpoint: cp,
        });
    }

    let width = task.shard_width;
    let shards = Shards {
        first: m_first,
        last: m_last,
        width,
        count: u64::try_from(u128::from(m_last - m_first) / (2 * u128::from(width)) + 1)
            .expect("at least two multipliers per shard"),
    };
    let scanner = ShardScanner::new(constraint, partner, m_last);
    let workers = opts.workers.max(1);

    let next_shard = AtomicU64::new(0);
    let cutoff = AtomicU64::new(u64::MAX);
    let stop = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(u64, Option<(u64, Natural)>)>();

    let result = thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let (next_shard, cutoff, stop, scanner, shards) =
                (&next_shard, &cutoff, &stop, &scanner, &shards);
            scope.spawn(move || {
                let mut buf = Vec::new();
                while !stop.load(Ordering::Relaxed) {
                    let j = next_shard.fetch_add(1, Ordering::Relaxed);
                    if j >= shards.count {
                        break;
                    }
                    // a lower shard already has a hit; nothing above it matters
                    if j > cutoff.load(Ordering::Acquire) {
                        break;
                    }
                    let (lo, hi) = shards.range(j);
                    let hit = scanner.scan(lo, hi, &mut buf);
                    if hit.is_some() {
                        cutoff.fetch_min(j, Ordering::AcqRel);
                    }
                    if tx.send((j, hit)).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);

        let mut pending: BTreeMap<u64, Option<(u64, Natural)>> = BTreeMap::new();
        let mut prefix = 0u64;
        let mut completed_here = 0u64;
        let mut last_write = Instant::now();
        let mut coordinate = || -> Result<SearchOutcome, SearchError> {
            let outcome = 'coord: loop {
                let disconnected = match rx.recv_timeout(POLL) {
                    Ok((j, hit)) => {
                        pending.insert(j, hit);
                        false
                    }
                    Err(mpsc::RecvTimeoutError::Timeout) => false,
                    Err(mpsc::RecvTimeoutError::Disconnected) => true,
                };
                while let Some(hit) = pending.remove(&prefix) {
                    let (_, hi) = shards.range(prefix);
                    prefix += 1;
                    completed_here += 1;
                    cp.shards_done += 1;
                    match hit {
                        Some((m, r)) => {
                            cp.next_multiplier = next_even_after(m);
                            cp.best_found = Some(OddPrime::new(r).expect("candidate tested prime"));
                            persist(&mut cp)?;
                            break 'coord SearchOutcome::Found(cp.best_found.clone().unwrap());
                        }
                        None => cp.next_multiplier = next_even_after(hi),
                    }
                    persist(&mut cp)?;
                    last_write = Instant::now();
                    if prefix == shards.count {
                        break 'coord SearchOutcome::Exhausted;
                    }
                    if opts.max_shards.is_some_and(|n| completed_here >= n) {
                        break 'coord SearchOutcome::Interrupted;
                    }
                }
                if opts
                    .cancel
                    .as_ref()
                    .is_some_and(|c| c.load(Ordering::Relaxed))
                {
                    persist(&mut cp)?;
                    break SearchOutcome::Interrupted;
                }
                if disconnected {
                    return Err(SearchError::LostShard(prefix));
                }
                if last_write.elapsed() >= opts.checkpoint_interval {
                    persist(&mut cp)?;
                    last_write = Instant::now();
                }
            };
            Ok(outcome)
        };
        let outcome = coordinate();
        stop.store(true, Ordering::Relaxed);
        outcome
    });
    let outcome = result?;
    Ok(SearchReport {
        outcome,
        checkpoint: cp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(v: u64) -> OddPrime {
        OddPrime::from_u64(v).unwrap()
    }

    fn task(c: u64, p: u64, bound: u64) -> SearchTask {
        SearchTask::new(op(c), op(p), Natural::from(bound))
    }

    #[test]
    fn examples() {
        let r = run_search(&task(406507, 67, 2_000_000_000), None, 4).unwrap();
        assert_eq!(r.outcome, SearchOutcome::Exhausted);
        let r = run_search(&task(439, 7, 1_000_000), None, 1).unwrap();
        assert_eq!(r.outcome, SearchOutcome::Found(op(406507)));
        assert_eq!(r.checkpoint.next_multiplier, Natural::from(928u64));
        let r = run_search(&task(3, 5, 100), None, 2).unwrap();
        assert_eq!(r.outcome, SearchOutcome::Found(op(7)));
    }

    #[test]
    fn task_validation() {
        assert!(matches!(
            task(406507, 67, 100).validate(),
            Err(SearchError::InvalidTask(_))
        ));
        let t = task(7, 5, 100).with_shard_width(0);
        assert!(matches!(
            run_search(&t, None, 1),
            Err(SearchError::InvalidTask(_))
        ));
        assert!(task(7, 7, 1).validate().is_ok());
    }

    #[test]
    fn resume_rejects_other_task() {
        let cp = Checkpoint::fresh(task(7, 5, 100));
        assert!(matches!(
            run_search(&task(7, 5, 101), Some(&cp), 1),
            Err(SearchError::TaskMismatch)
        ));
    }

    #[test]
    fn finished_checkpoint_returns_immediately() {
        let t = task(439, 7, 1_000_000);
        let done = run_search(&t, None, 2).unwrap().checkpoint;
        let again = run_search(&t, Some(&done), 2).unwrap();
        assert_eq!(again.outcome, SearchOutcome::Found(op(406507)));
    }

    #[test]
    fn exhausted_checkpoint_moves_past_range() {
        let t = task(406507, 67, 2_000_000_000).with_shard_width(100);
        let r = run_search(&t, None, 3).unwrap();
        assert_eq!(r.outcome, SearchOutcome::Exhausted);
        assert_eq!(r.checkpoint.next_multiplier, Natural::from(4920u64));
        assert_eq!(r.checkpoint.shards_done, 25);
        let again = run_search(&t, Some(&r.checkpoint), 3).unwrap();
        assert_eq!(again.outcome, SearchOutcome::Exhausted);
        assert_eq!(again.checkpoint.shards_done, 25);
    }

    #[test]
    fn max_shards_interrupts_at_boundary() {
        let t = task(7, 406507, 1_000_000).with_shard_width(4);
        let opts = SearchOptions {
            max_shards: Some(1),
            ..SearchOptions::with_workers(1)
        };
        let first = run_search_with(&t, None, &opts).unwrap();
        // shard 0 is 58074..=58080; 67 = 7 * 58082 - 406507 sits in shard 1
        assert_eq!(first.outcome, SearchOutcome::Interrupted);
        assert_eq!(first.checkpoint.next_multiplier, Natural::from(58082u64));
        let rest = run_search(&t, Some(&first.checkpoint), 2).unwrap();
        assert_eq!(rest.outcome, SearchOutcome::Found(op(67)));
        assert_eq!(rest.checkpoint.shards_done, 2);
    }

    #[test]
    fn cancellation_writes_checkpoint() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let cancel = Arc::new(AtomicBool::new(true));
        let t = task(406507, 67, 2_000_000_000).with_shard_width(1);
        let opts = SearchOptions {
            checkpoint_path: Some(path.clone()),
            cancel: Some(cancel),
            ..SearchOptions::with_workers(1)
        };
        let r = run_search_with(&t, None, &opts).unwrap();
        // a shard may or may not have finished before the flag was seen
        if r.outcome == SearchOutcome::Interrupted {
            assert_eq!(load_checkpoint(&path).unwrap().task, t);
        }
    }
}
