//! `pfib`: prime Fibonacci sequences from the command line.
//!
//! Exit codes: 0 success, 2 bad input, 3 bound or search exhausted,
//! 4 b-file mismatch, 130 interrupted, 1 internal failure.

mod bfile;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use pfib_core::arith::Natural;
use thiserror::Error;

use output::{Format, Out};

#[derive(Debug, Parser)]
#[command(name = "pfib", version, about = "Prime Fibonacci sequence toolkit")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Crt,
    Minimal,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate the forward sequence from two odd primes.
    Forward {
        p: Natural,
        q: Natural,
        /// Stop after this many terms if the sequence has not terminated.
        #[arg(long, default_value_t = 10_000)]
        max_terms: usize,
    },
    /// Find p0 such that p2 is the smallest odd prime divisor of p0 + p1.
    ExtendLeft {
        p1: Natural,
        p2: Natural,
        #[arg(long, value_enum, default_value_t = Method::Minimal)]
        method: Method,
        /// Largest candidate tried by the minimal method.
        #[arg(long, default_value = "2000000000")]
        bound: Natural,
        /// Progression terms scanned by the crt method.
        #[arg(long, default_value_t = pfib_core::seqcore::DEFAULT_CRT_STEPS)]
        steps: u64,
    },
    /// Generate a reversed sequence by repeated minimal left extension.
    Reversed {
        p: Natural,
        q: Natural,
        #[arg(long, default_value_t = 16)]
        terms: usize,
        /// Largest candidate tried at each step.
        #[arg(long, default_value = "2000000000")]
        bound: Natural,
        /// Search threads (default: PFIB_WORKERS or all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Save search progress here and resume from it if present.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Scan every odd prime instead of the filtered multipliers.
        #[arg(long)]
        naive: bool,
    },
    /// Build a sequence of length at least k from a prime progression.
    GreenTao {
        #[arg(long)]
        k: u32,
        /// Progression as first,difference,length.
        #[arg(long)]
        ap: Option<String>,
        /// Largest first term and difference tried when searching.
        #[arg(long, default_value_t = 10_000)]
        search_limit: u64,
    },
    /// Compare a reversed sequence against an OEIS b-file.
    VerifyBfile {
        p: Natural,
        q: Natural,
        path: PathBuf,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Exhausted(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("interrupted")]
    Interrupted,
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Exhausted(_) => 3,
            CliError::Mismatch(_) => 4,
            CliError::Interrupted => 130,
            CliError::Internal(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out::new(cli.format);
    let cancel = Arc::new(AtomicBool::new(false));
    {
        let cancel = cancel.clone();
        // a second interrupt while the final checkpoint is written kills the process
        let _ = ctrlc::set_handler(move || {
            if cancel.swap(true, Ordering::SeqCst) {
                std::process::exit(130);
            }
        });
    }

    let result = match cli.command {
        Command::Forward { p, q, max_terms } => commands::forward(&out, p, q, max_terms),
        Command::ExtendLeft {
            p1,
            p2,
            method,
            bound,
            steps,
        } => match method {
            Method::Minimal => commands::extend_left_minimal(&out, p1, p2, bound),
            Method::Crt => commands::extend_left_crt(&out, p1, p2, steps),
        },
        Command::Reversed {
            p,
            q,
            terms,
            bound,
            workers,
            checkpoint,
            naive,
        } => commands::reversed(
            &out,
            commands::ReversedArgs {
                p,
                q,
                terms,
                bound,
                workers,
                checkpoint,
                naive,
                cancel,
            },
        ),
        Command::GreenTao {
            k,
            ap,
            search_limit,
        } => commands::green_tao(&out, k, ap.as_deref(), search_limit),
        Command::VerifyBfile { p, q, path } => commands::verify_bfile(&out, p, q, &path),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // exhaustion and mismatches are results; records carry them already
            match &e {
                CliError::Exhausted(msg) | CliError::Mismatch(msg) if !out.records() => {
                    println!("{msg}")
                }
                _ => eprintln!("pfib: {e}"),
            }
            ExitCode::from(e.code())
        }
    }
}
