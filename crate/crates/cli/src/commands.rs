use std::path::{Path, PathBuf};
use std::sync::atomic::AtomicBool;
use std::sync::Arc;

use pfib_core::arith::{Natural, OddPrime};
use pfib_core::searchctl::SearchError;
use pfib_core::seqcore::{
    extend_left_crt as crt, extend_left_minimal as minimal, find_prime_ap, generate_forward,
    green_tao_sequence, index_recurrence, Extension, ForwardStatus, PrimeAp, ReversedGenerator,
    ReversedStatus, Seed, SeqError, StepStrategy,
};
use serde_json::{json, Value};

use crate::bfile::BFile;
use crate::output::{join, num, terms_json, Out};
use crate::CliError;

fn prime(n: Natural) -> Result<OddPrime, CliError> {
    OddPrime::new(n).map_err(|e| CliError::Input(e.to_string()))
}

fn seq_error(e: SeqError) -> CliError {
    match e {
        SeqError::EqualPrimes(_)
        | SeqError::TooFewTerms(_)
        | SeqError::KOutOfRange(_)
        | SeqError::ApLength { .. }
        | SeqError::InvalidAp(_)
        | SeqError::Arith(_) => CliError::Input(e.to_string()),
        SeqError::BoundExhausted { .. } => CliError::Exhausted(e.to_string()),
        SeqError::Search(
            ref s @ (SearchError::Corrupt(_)
            | SearchError::Io { .. }
            | SearchError::InvalidTask(_)
            | SearchError::Unsupported(_)),
        ) => CliError::Input(s.to_string()),
        _ => CliError::Internal(e.to_string()),
    }
}

pub fn forward(out: &Out, p: Natural, q: Natural, max_terms: usize) -> Result<(), CliError> {
    let seed = Seed::new(prime(p)?, prime(q)?);
    let seq = generate_forward(&seed, max_terms).map_err(seq_error)?;
    let terms = join(&seq.terms);
    let (tail, status) = match &seq.status {
        ForwardStatus::Terminated { final_sum } => (
            format!("terminated: {final_sum}"),
            json!({"status": "terminated", "final_sum": num(final_sum)}),
        ),
        ForwardStatus::Constant => ("constant".to_string(), json!({"status": "constant"})),
        ForwardStatus::Truncated { limit } => (
            format!("truncated: {limit} terms"),
            json!({"status": "truncated", "limit": limit}),
        ),
    };
    out.line(format!("{terms} | {tail}"));
    let mut result = status;
    result["terms"] = terms_json(&seq.terms);
    out.record(
        "forward",
        json!({"p": seed.p1.to_string(), "q": seed.p2.to_string(), "max_terms": max_terms}),
        result,
    );
    Ok(())
}

pub fn extend_left_minimal(
    out: &Out,
    p1: Natural,
    p2: Natural,
    bound: Natural,
) -> Result<(), CliError> {
    let (p1, p2) = (prime(p1)?, prime(p2)?);
    let inputs = json!({
        "p1": p1.to_string(), "p2": p2.to_string(), "method": "minimal", "bound": num(&bound),
    });
    match minimal(&p1, &p2, &bound) {
        Extension::Found(p0) => {
            out.line(p0.to_string());
            out.record("extend-left", inputs, json!({"p0": p0.to_string()}));
            Ok(())
        }
        Extension::Exhausted => {
            out.record(
                "extend-left",
                inputs,
                json!({"status": "bound_exhausted", "bound": num(&bound)}),
            );
            Err(CliError::Exhausted(format!("no candidate ≤ {bound}")))
        }
    }
}

pub fn extend_left_crt(out: &Out, p1: Natural, p2: Natural, steps: u64) -> Result<(), CliError> {
    let (p1, p2) = (prime(p1)?, prime(p2)?);
    let inputs = json!({
        "p1": p1.to_string(), "p2": p2.to_string(), "method": "crt", "steps": steps,
    });
    let ext = match crt(&p1, &p2, steps) {
        Ok(ext) => ext,
        Err(SeqError::BoundExhausted { steps }) => {
            out.record(
                "extend-left",
                inputs,
                json!({"status": "bound_exhausted", "steps": steps}),
            );
            return Err(CliError::Exhausted(format!(
                "no odd prime among the first {steps} progression terms"
            )));
        }
        Err(e) => return Err(seq_error(e)),
    };
    let sys = &ext.system;
    let congruences: Vec<String> = sys
        .congruences
        .iter()
        .map(|(r, m)| format!("{r} mod {m}"))
        .collect();
    out.line(ext.p0.to_string());
    out.line(format!("system: {}", congruences.join(", ")));
    out.line(format!(
        "solution: {} mod {}",
        sys.solution, sys.combined_modulus
    ));
    out.line(format!("progression index: {}", ext.progression_index));
    out.record(
        "extend-left",
        inputs,
        json!({
            "p0": ext.p0.to_string(),
            "congruences": sys.congruences.iter()
                .map(|(r, m)| json!({"residue": num(r), "modulus": num(m)}))
                .collect::<Vec<_>>(),
            "solution": num(&sys.solution),
            "modulus": num(&sys.combined_modulus),
            "progression_index": ext.progression_index,
        }),
    );
    Ok(())
}

pub struct ReversedArgs {
    pub p: Natural,
    pub q: Natural,
    pub terms: usize,
    pub bound: Natural,
    pub workers: Option<usize>,
    pub checkpoint: Option<PathBuf>,
    pub naive: bool,
    pub cancel: Arc<AtomicBool>,
}

pub fn reversed(out: &Out, args: ReversedArgs) -> Result<(), CliError> {
    let seed = Seed::new(prime(args.p)?, prime(args.q)?);
    if args.terms < 2 {
        return Err(CliError::Input(format!(
            "--terms must be at least 2, got {}",
            args.terms
        )));
    }
    let mut gen = ReversedGenerator::new(args.bound.clone());
    if let Some(w) = args.workers {
        if w == 0 {
            return Err(CliError::Input("--workers must be at least 1".into()));
        }
        gen.workers = w;
    }
    gen.checkpoint = args.checkpoint.clone();
    if args.naive {
        gen.strategy = StepStrategy::Naive;
    }
    gen.cancel = Some(args.cancel);

    let inputs = json!({
        "p": seed.p1.to_string(),
        "q": seed.p2.to_string(),
        "terms": args.terms,
        "bound": num(&args.bound),
        "workers": gen.workers,
        "checkpoint": args.checkpoint.as_ref().map(|p| p.display().to_string()),
        "naive": args.naive,
    });
    let seq = gen
        .run(&seed, args.terms, |i, t| {
            out.partial(if i == 0 {
                t.to_string()
            } else {
                format!(" {t}")
            });
            out.event(json!({
                "command": "reversed", "event": "term", "index": i + 1, "value": t.to_string(),
            }));
        })
        .map_err(seq_error);
    out.partial("\n");
    let seq = seq?;

    let mut result = json!({"terms": terms_json(&seq.terms)});
    match &seq.status {
        ReversedStatus::Complete => {
            result["status"] = json!("complete");
            out.record("reversed", inputs, result);
            Ok(())
        }
        ReversedStatus::BoundExhausted { at_index, bound } => {
            result["status"] = json!("bound_exhausted");
            result["at_index"] = json!(at_index + 1);
            result["bound"] = num(bound);
            out.record("reversed", inputs, result);
            Err(CliError::Exhausted(format!(
                "term {}: no candidate ≤ {bound}",
                at_index + 1
            )))
        }
        ReversedStatus::Interrupted { at_index } => {
            result["status"] = json!("interrupted");
            result["at_index"] = json!(at_index + 1);
            out.record("reversed", inputs, result);
            match &args.checkpoint {
                Some(path) => eprintln!(
                    "term {}: interrupted, progress saved to {}",
                    at_index + 1,
                    path.display()
                ),
                None => eprintln!("term {}: interrupted", at_index + 1),
            }
            Err(CliError::Interrupted)
        }
    }
}

fn parse_ap(text: &str) -> Result<PrimeAp, CliError> {
    let bad = || {
        CliError::Input(format!(
            "--ap expects first,difference,length; got {text:?}"
        ))
    };
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [first, diff, len] = parts[..] else {
        return Err(bad());
    };
    let first: Natural = first.parse().map_err(|_| bad())?;
    let diff: Natural = diff.parse().map_err(|_| bad())?;
    let len: usize = len.parse().map_err(|_| bad())?;
    PrimeAp::new(first, diff, len).map_err(seq_error)
}

pub fn green_tao(out: &Out, k: u32, ap: Option<&str>, search_limit: u64) -> Result<(), CliError> {
    let b = index_recurrence(k).map_err(seq_error)?;
    let length = b[1] + 1;
    let ap = match ap {
        Some(text) => parse_ap(text)?,
        None => {
            let length = usize::try_from(length)
                .map_err(|_| CliError::Input(format!("k = {k} needs too long a progression")))?;
            find_prime_ap(length, search_limit)
                .map_err(seq_error)?
                .ok_or_else(|| {
                    CliError::Exhausted(format!(
                        "no prime progression of length {length} with first term and difference ≤ {search_limit}"
                    ))
                })?
        }
    };
    let seq = green_tao_sequence(k, &ap).map_err(seq_error)?;
    let ap_text = format!("{},{},{}", ap.first(), ap.difference(), ap.len());
    out.line(format!("ap: {ap_text}"));
    out.line(format!("b: {}", join(&b)));
    out.line(format!("sequence: {}", join(&seq.terms)));
    out.line(format!("length: {} (≥ {k})", seq.terms.len()));
    out.record(
        "green-tao",
        json!({"k": k, "search_limit": search_limit}),
        json!({
            "ap": {"first": num(ap.first()), "difference": num(ap.difference()), "length": ap.len()},
            "b": b.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "terms": terms_json(&seq.terms),
            "length": seq.terms.len(),
        }),
    );
    Ok(())
}

pub fn verify_bfile(out: &Out, p: Natural, q: Natural, path: &Path) -> Result<(), CliError> {
    let seed = Seed::new(prime(p)?, prime(q)?);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let bfile =
        BFile::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let expected: Vec<&Natural> = bfile.values().collect();
    let bound = expected.iter().copied().max().expect("non-empty").clone();
    let seq = ReversedGenerator::new(bound.clone())
        .run(&seed, expected.len().max(2), |_, _| {})
        .map_err(seq_error)?;
    let inputs = json!({
        "p": seed.p1.to_string(), "q": seed.p2.to_string(), "path": path.display().to_string(),
    });
    for (i, want) in expected.iter().enumerate() {
        let got = seq.terms.get(i).map(|t| t.value());
        if got != Some(*want) {
            let got_text = got.map_or_else(|| format!("none ≤ {bound}"), |g| g.to_string());
            out.record(
                "verify-bfile",
                inputs,
                json!({
                    "status": "mismatch",
                    "index": i + 1,
                    "expected": num(want),
                    "got": got.map_or(Value::Null, num),
                }),
            );
            return Err(CliError::Mismatch(format!(
                "index {}: expected {want}, got {got_text}",
                i + 1
            )));
        }
    }
    out.line(format!("ok: {} terms match", expected.len()));
    out.record(
        "verify-bfile",
        inputs,
        json!({"status": "match", "terms": expected.len()}),
    );
    Ok(())
}
