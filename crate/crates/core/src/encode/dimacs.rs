//! DIMACS CNF reading and writing.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use thiserror::Error;

use super::{Cnf, Literal};

/// Largest variable count the parser accepts.
pub const MAX_DIMACS_VARS: usize = 1 << 28;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: no `p cnf` header before clauses")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: literal {literal} outside 1..={num_vars}")]
    LiteralOutOfRange {
        line: usize,
        literal: i64,
        num_vars: usize,
    },
    #[error("last clause is missing its terminating 0")]
    MissingTerminator,
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCountMismatch { declared: usize, found: usize },
}

pub fn write_dimacs_string(cnf: &Cnf) -> String {
    let mut out = String::new();
    for c in &cnf.comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    let _ = writeln!(out, "p cnf {} {}", cnf.num_vars, cnf.clauses.len());
    for clause in &cnf.clauses {
        for lit in clause {
            let _ = write!(out, "{lit} ");
        }
        out.push_str("0\n");
    }
    out
}

pub fn write_dimacs(cnf: &Cnf, path: &Path) -> std::io::Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(write_dimacs_string(cnf).as_bytes())?;
    f.flush()
}

pub fn parse_dimacs(path: &Path) -> crate::Result<Cnf> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_dimacs_str(&text)?)
}

/// Parses a DIMACS CNF file. Comment lines are kept; clauses may span lines
/// but each must end with `0`, and the clause count must match the header.
pub fn parse_dimacs_str(text: &str) -> Result<Cnf, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut cnf = Cnf::default();
    let mut current: Vec<Literal> = Vec::new();
    let mut open = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                cnf.comments.push(rest.trim_start().to_string());
                continue;
            }
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::MalformedHeader {
                    line,
                    reason: "duplicate header".into(),
                });
            }
            header = Some(parse_header(trimmed, line)?);
            cnf.num_vars = header.unwrap().0;
            continue;
        }
        // "%" ends the clause section in some benchmark files.
        if trimmed == "%" {
            break;
        }
        let Some((num_vars, _)) = header else {
            return Err(DimacsError::MissingHeader { line });
        };
        for token in trimmed.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| DimacsError::InvalidToken {
                line,
                token: token.to_string(),
            })?;
            if lit == 0 {
                cnf.clauses.push(std::mem::take(&mut current));
                open = false;
                continue;
            }
            if lit.unsigned_abs() > num_vars as u64 {
                return Err(DimacsError::LiteralOutOfRange {
                    line,
                    literal: lit,
                    num_vars,
                });
            }
            current.push(lit as Literal);
            open = true;
        }
    }
    if open {
        return Err(DimacsError::MissingTerminator);
    }
    let Some((_, declared)) = header else {
        return Err(DimacsError::MissingHeader {
            line: text.lines().count() + 1,
        });
    };
    if declared != cnf.clauses.len() {
        return Err(DimacsError::ClauseCountMismatch {
            declared,
            found: cnf.clauses.len(),
        });
    }
    Ok(cnf)
}

fn parse_header(line_text: &str, line: usize) -> Result<(usize, usize), DimacsError> {
    let malformed = |reason: &str| DimacsError::MalformedHeader {
        line,
        reason: reason.to_string(),
    };
    let fields: Vec<&str> = line_text.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "p" {
        return Err(malformed("expected `p cnf <vars> <clauses>`"));
    }
    if fields[1] != "cnf" {
        return Err(malformed("format is not `cnf`"));
    }
    let vars: usize = fields[2]
        .parse()
        .map_err(|_| malformed("bad variable count"))?;
    let clauses: usize = fields[3]
        .parse()
        .map_err(|_| malformed("bad clause count"))?;
    if vars > MAX_DIMACS_VARS {
        return Err(malformed("variable count too large"));
    }
    Ok((vars, clauses))
}
