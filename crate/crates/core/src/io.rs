//! Text graph format.
//!
//! ```text
//! c optional comments
//! p <n> <m>
//! e <u> <v> <w>      (exactly m lines)
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("missing `p <n> <m>` header")]
    MissingHeader,
    #[error("header declares {declared} edges, found {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn malformed(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        reason: reason.into(),
    }
}

fn fields<const N: usize>(line: usize, rest: &str) -> Result<[&str; N], ParseError> {
    let parts: Vec<&str> = rest.split_whitespace().collect();
    parts
        .try_into()
        .map_err(|p: Vec<&str>| malformed(line, format!("expected {N} fields, found {}", p.len())))
}

fn number<T: std::str::FromStr>(line: usize, text: &str) -> Result<T, ParseError> {
    text.parse()
        .map_err(|_| malformed(line, format!("invalid number `{text}`")))
}

pub fn parse_graph_file(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(Vertex, Vertex, Weight)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        let (tag, rest) = trimmed
            .split_once(char::is_whitespace)
            .unwrap_or((trimmed, ""));
        match tag {
            "" | "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(malformed(line, "second header"));
                }
                let [n, m] = fields::<2>(line, rest)?;
                header = Some((number(line, n)?, number(line, m)?));
            }
            "e" => {
                if header.is_none() {
                    return Err(malformed(line, "edge before header"));
                }
                let [u, v, w] = fields::<3>(line, rest)?;
                edges.push((number(line, u)?, number(line, v)?, number(line, w)?));
            }
            other => return Err(malformed(line, format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if edges.len() != m {
        return Err(ParseError::EdgeCountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    Ok(Graph::build(n, &edges)?)
}

/// Canonical text: header, then edges sorted with the smaller endpoint first.
pub fn write_graph_file(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.edge_count());
    for (u, v, w) in g.edges() {
        let _ = writeln!(out, "e {u} {v} {w}");
    }
    out
}
