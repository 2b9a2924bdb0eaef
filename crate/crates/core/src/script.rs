//! Operation scripts: one operation per line, `I <key> <value>`, `D <key>`
//! or `Q <key>`, with unsigned 64-bit decimal operands. Blank lines and
//! lines starting with `#` are ignored.

use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Op {
    Insert { key: u64, value: u64 },
    Delete { key: u64 },
    Query { key: u64 },
}

impl Op {
    pub fn key(&self) -> u64 {
        match *self {
            Op::Insert { key, .. } | Op::Delete { key } | Op::Query { key } => key,
        }
    }

    /// Inserts and deletes advance the table's phase clock; queries do not.
    pub fn is_update(&self) -> bool {
        !matches!(self, Op::Query { .. })
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Op::Insert { key, value } => write!(f, "I {key} {value}"),
            Op::Delete { key } => write!(f, "D {key}"),
            Op::Query { key } => write!(f, "Q {key}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn operand(tok: Option<&str>, what: &str, line: usize) -> Result<u64, ParseError> {
    let tok = tok.ok_or_else(|| ParseError {
        line,
        message: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| ParseError {
        line,
        message: format!("{what} {tok:?} is not an unsigned 64-bit integer"),
    })
}

pub fn parse_line(text: &str, line: usize) -> Result<Option<Op>, ParseError> {
    let text = text.trim();
    if text.is_empty() || text.starts_with('#') {
        return Ok(None);
    }
    let mut toks = text.split_ascii_whitespace();
    let op = match toks.next() {
        Some("I") => Op::Insert {
            key: operand(toks.next(), "key", line)?,
            value: operand(toks.next(), "value", line)?,
        },
        Some("D") => Op::Delete {
            key: operand(toks.next(), "key", line)?,
        },
        Some("Q") => Op::Query {
            key: operand(toks.next(), "key", line)?,
        },
        Some(other) => {
            return Err(ParseError {
                line,
                message: format!("unknown operation {other:?}"),
            })
        }
        None => unreachable!("non-empty line has a token"),
    };
    if let Some(extra) = toks.next() {
        return Err(ParseError {
            line,
            message: format!("unexpected trailing token {extra:?}"),
        });
    }
    Ok(Some(op))
}

pub fn parse_script(text: &str) -> Result<Vec<Op>, ParseError> {
    let mut ops = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(op) = parse_line(line, i + 1)? {
            ops.push(op);
        }
    }
    Ok(ops)
}

pub fn write_script<W: Write>(mut out: W, ops: &[Op]) -> io::Result<()> {
    for op in ops {
        writeln!(out, "{op}")?;
    }
    Ok(())
}
