//! OEIS b-file parsing: `index value` pairs, one per line, with `#` comments.

use std::fmt;

use pfib_core::arith::Natural;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    /// Values in file order; entry `i` is term `i + 1`.
    pub entries: Vec<(i64, Natural)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

impl BFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut entries: Vec<(i64, Natural)> = Vec::new();
        let mut last_line = 0;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            last_line = line;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let err = |message: String| ParseError { line, message };
            let mut fields = body.split_whitespace();
            let (Some(index), Some(value), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(err(format!("expected \"index value\", got {body:?}")));
            };
            let index: i64 = index
                .parse()
                .map_err(|_| err(format!("bad index {index:?}")))?;
            let value: Natural = value
                .parse()
                .map_err(|e| err(format!("bad value {value:?}: {e}")))?;
            if let Some(&(prev, _)) = entries.last() {
                if index != prev + 1 {
                    return Err(err(format!(
                        "index {index} does not follow {prev}; indices must be consecutive"
                    )));
                }
            }
            entries.push((index, value));
        }
        if entries.is_empty() {
            return Err(ParseError {
                line: last_line,
                message: "no entries".into(),
            });
        }
        Ok(BFile { entries })
    }

    pub fn values(&self) -> impl Iterator<Item = &Natural> {
        self.entries.iter().map(|(_, v)| v)
    }
}
