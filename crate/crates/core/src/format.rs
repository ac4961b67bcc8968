//! Matrix text format.
//!
//! ```text
//! # optional comment lines
//! CGW n=2 w=2 k=2
//! 0 0
//! 0 1
//! ```
//!
//! Token `.` is zero, a decimal `e` with `0 <= e < k` is `ζ_k^e`.

use crate::cyclotomic::Entry;
use crate::error::{parse_err, Result};
use crate::matrix::GwMatrix;

/// A parsed matrix file, keeping the header weight and comment lines so that
/// canonical text round-trips byte for byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    /// Comment lines without the leading `#`.
    pub comments: Vec<String>,
    pub declared_weight: u32,
    pub matrix: GwMatrix,
}

impl MatrixFile {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push('#');
            out.push_str(c);
            out.push('\n');
        }
        write_body(&mut out, &self.matrix, self.declared_weight);
        out
    }
}

fn write_body(out: &mut String, m: &GwMatrix, w: u32) {
    use std::fmt::Write;
    let n = m.n();
    let _ = writeln!(out, "CGW n={} w={} k={}", n, w, m.k());
    for i in 0..n {
        let line = m
            .row(i)
            .iter()
            .map(|e| match e {
                Entry::Zero => ".".to_string(),
                Entry::Root(x) => x.to_string(),
            })
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&line);
        out.push('\n');
    }
}

/// Serialise with `w` taken from the weight of row 0. Comment lines are
/// emitted verbatim with a `#` prefix.
pub fn matrix_to_text(m: &GwMatrix, comments: &[String]) -> String {
    let w = if m.n() == 0 {
        0
    } else {
        m.row_weight(0) as u32
    };
    MatrixFile {
        comments: comments.to_vec(),
        declared_weight: w,
        matrix: m.clone(),
    }
    .to_text()
}

fn header_field(tok: Option<(usize, &str)>, key: &str, line: usize) -> Result<u64> {
    let (col, tok) =
        tok.ok_or_else(|| parse_err(line, 1, format!("header is missing `{key}=`")))?;
    let val = tok
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| parse_err(line, col, format!("expected `{key}=<int>`, found `{tok}`")))?;
    val.parse::<u64>()
        .map_err(|_| parse_err(line, col, format!("`{key}` is not a nonnegative integer")))
}

/// Split a line into `(1-based column, token)` pairs.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out.into_iter()
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    let lines: Vec<&str> = text.split('\n').collect();
    let mut idx = 0;
    let mut comments = Vec::new();
    while idx < lines.len() && lines[idx].starts_with('#') {
        comments.push(lines[idx][1..].to_string());
        idx += 1;
    }
    let lineno = idx + 1;
    let header = lines
        .get(idx)
        .copied()
        .filter(|l| !l.trim().is_empty())
        .ok_or_else(|| parse_err(lineno, 1, "missing `CGW` header"))?;
    let mut toks = tokens(header);
    match toks.next() {
        Some((_, "CGW")) => {}
        Some((c, t)) => return Err(parse_err(lineno, c, format!("expected `CGW`, found `{t}`"))),
        None => return Err(parse_err(lineno, 1, "missing `CGW` header")),
    }
    let n = header_field(toks.next(), "n", lineno)? as usize;
    let w = header_field(toks.next(), "w", lineno)?;
    let k = header_field(toks.next(), "k", lineno)?;
    if let Some((c, t)) = toks.next() {
        return Err(parse_err(
            lineno,
            c,
            format!("unexpected header token `{t}`"),
        ));
    }
    if k == 0 || k > u32::MAX as u64 {
        return Err(parse_err(lineno, 1, "k must be a positive 32-bit integer"));
    }
    if w > n as u64 {
        return Err(parse_err(
            lineno,
            1,
            format!("weight {w} exceeds order {n}"),
        ));
    }
    let k = k as u32;
    idx += 1;
    let mut entries = Vec::with_capacity(n * n);
    for r in 0..n {
        let lineno = idx + r + 1;
        let line = lines
            .get(idx + r)
            .copied()
            .ok_or_else(|| parse_err(lineno, 1, format!("expected {n} rows, found {r}")))?;
        let mut count = 0;
        for (col, tok) in tokens(line) {
            count += 1;
            if count > n {
                return Err(parse_err(
                    lineno,
                    col,
                    format!("row has more than {n} entries"),
                ));
            }
            let e = if tok == "." {
                Entry::Zero
            } else {
                let e: u32 = tok
                    .parse()
                    .map_err(|_| parse_err(lineno, col, format!("invalid token `{tok}`")))?;
                if e >= k {
                    return Err(parse_err(
                        lineno,
                        col,
                        format!("exponent {e} out of range for k={k}"),
                    ));
                }
                Entry::Root(e)
            };
            entries.push(e);
        }
        if count < n {
            return Err(parse_err(
                lineno,
                line.len() + 1,
                format!("row has {count} entries, expected {n}"),
            ));
        }
    }
    let rest = &lines[(idx + n).min(lines.len())..];
    if let Some(off) = rest.iter().position(|l| !l.trim().is_empty()) {
        return Err(parse_err(
            idx + n + off + 1,
            1,
            "trailing content after matrix",
        ));
    }
    let matrix = GwMatrix::new(n, k, entries)?;
    Ok(MatrixFile {
        comments,
        declared_weight: w as u32,
        matrix,
    })
}
