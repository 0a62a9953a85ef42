use std::io::{self, Write};
use std::time::Instant;

use clap::ValueEnum;
use pfib_core::arith::{Natural, OddPrime};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable text.
    Plain,
    /// One JSON object per line.
    Records,
}

/// Writes either plain text or line-delimited JSON records to stdout.
pub struct Out {
    pub format: Format,
    started: Instant,
}

impl Out {
    pub fn new(format: Format) -> Self {
        Out {
            format,
            started: Instant::now(),
        }
    }

    pub fn records(&self) -> bool {
        self.format == Format::Records
    }

    pub fn line(&self, text: impl AsRef<str>) {
        if !self.records() {
            println!("{}", text.as_ref());
        }
    }

    /// Writes without a newline and flushes, for terms that arrive slowly.
    pub fn partial(&self, text: impl AsRef<str>) {
        if !self.records() {
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(text.as_ref().as_bytes());
            let _ = stdout.flush();
        }
    }

    /// Emits a record line in records mode; plain mode ignores it.
    pub fn event(&self, value: Value) {
        if self.records() {
            let mut stdout = io::stdout().lock();
            let _ = writeln!(stdout, "{value}");
            let _ = stdout.flush();
        }
    }

    /// The closing record of a command.
    pub fn record(&self, command: &str, inputs: Value, result: Value) {
        self.event(json!({
            "command": command,
            "inputs": inputs,
            "result": result,
            "wall_seconds": self.started.elapsed().as_secs_f64(),
        }));
    }
}

pub fn join<'a, T: std::fmt::Display + 'a>(items: impl IntoIterator<Item = &'a T>) -> String {
    items
        .into_iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn terms_json(terms: &[OddPrime]) -> Value {
    Value::Array(terms.iter().map(|t| Value::String(t.to_string())).collect())
}

pub fn num(n: &Natural) -> Value {
    Value::String(n.to_string())
}
