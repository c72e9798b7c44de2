//! Parsers for small-graph inputs: one-line graph6 strings (up to 62
//! vertices) and plain "u v" edge-list text.

use std::collections::HashSet;

use crate::graph::EdgeId;
use crate::{Error, Result};

/// Decodes one graph6 line into its vertex count and edge list.
///
/// Handles the single-byte size header, so 0 to 62 vertices; the long
/// forms are rejected. The optional `>>graph6<<` prefix is accepted.
///
/// # Errors
/// `Parse` on a malformed line, a size beyond 62, stray bytes, or
/// nonzero padding bits.
pub fn parse_graph6(line: &str) -> Result<(usize, Vec<EdgeId>)> {
    let line = line.trim();
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes = line.as_bytes();
    let Some(&b0) = bytes.first() else {
        return Err(Error::Parse("empty graph6 line".into()));
    };
    if b0 == 126 {
        return Err(Error::Parse(
            "graph6 long size forms (over 62 vertices) are not supported".into(),
        ));
    }
    if !(63..=125).contains(&b0) {
        return Err(Error::Parse(format!(
            "graph6 size byte {b0} outside the printable range"
        )));
    }
    let n = (b0 - 63) as usize;
    let pairs = n * n.saturating_sub(1) / 2;
    let need = pairs.div_ceil(6);
    if bytes.len() != 1 + need {
        return Err(Error::Parse(format!(
            "graph6 line for {n} vertices needs {need} data bytes, got {}",
            bytes.len() - 1
        )));
    }
    let chunk = |i: usize| -> Result<u8> {
        let b = bytes[1 + i];
        if !(63..=126).contains(&b) {
            return Err(Error::Parse(format!("graph6 data byte {b} out of range")));
        }
        Ok(b - 63)
    };
    let mut edges = Vec::new();
    let mut bit = 0usize;
    for v in 1..n {
        for u in 0..v {
            if (chunk(bit / 6)? >> (5 - bit % 6)) & 1 == 1 {
                edges.push(EdgeId::new(u as u32, v as u32)?);
            }
            bit += 1;
        }
    }
    while bit % 6 != 0 {
        if (chunk(bit / 6)? >> (5 - bit % 6)) & 1 == 1 {
            return Err(Error::Parse("nonzero graph6 padding bits".into()));
        }
        bit += 1;
    }
    Ok((n, edges))
}

/// Parses edge-list text: one "u v" pair per line, `#` starts a comment,
/// blank lines skipped. The vertex count is one past the largest label.
///
/// # Errors
/// `Parse` on malformed lines, loops, or repeated edges.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<EdgeId>)> {
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut n = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse(format!(
                "line {}: expected exactly two vertex labels, got {line:?}",
                idx + 1
            )));
        };
        let parse = |s: &str| -> Result<u32> {
            s.parse()
                .map_err(|_| Error::Parse(format!("line {}: bad vertex label {s:?}", idx + 1)))
        };
        let e = EdgeId::new(parse(a)?, parse(b)?)
            .map_err(|e| Error::Parse(format!("line {}: {e}", idx + 1)))?;
        if !seen.insert(e) {
            return Err(Error::Parse(format!("line {}: repeated edge {e}", idx + 1)));
        }
        n = n.max(e.v as usize + 1);
        edges.push(e);
    }
    Ok((n, edges))
}

// ----------------------------------------------------------------------
