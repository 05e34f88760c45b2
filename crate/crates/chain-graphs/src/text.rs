//! One-edge-per-line text format: `a -- b`, `a -> b`, `a <-> b`.
//!
//! Vertices are declared implicitly by appearing in an edge. Blank lines and
//! lines starting with `#` are skipped.

use crate::error::{GraphError, Result};

/// A single labeled edge of any of the three kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edge {
    Undirected(String, String),
    Directed(String, String),
    Arc(String, String),
}

impl Edge {
    pub fn undirected(a: impl Into<String>, b: impl Into<String>) -> Edge {
        Edge::Undirected(a.into(), b.into())
    }

    pub fn directed(from: impl Into<String>, to: impl Into<String>) -> Edge {
        Edge::Directed(from.into(), to.into())
    }

    pub fn arc(a: impl Into<String>, b: impl Into<String>) -> Edge {
        Edge::Arc(a.into(), b.into())
    }

    pub fn endpoints(&self) -> (&str, &str) {
        match self {
            Edge::Undirected(a, b) | Edge::Directed(a, b) | Edge::Arc(a, b) => (a, b),
        }
    }
}

/// Parses edge lines, reporting the 1-based line number on failure.
pub fn parse_edges(text: &str) -> Result<Vec<Edge>> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let edge = match parts.as_slice() {
            [a, "--", b] => Edge::undirected(*a, *b),
            [a, "->", b] => Edge::directed(*a, *b),
            [a, "<->", b] => Edge::arc(*a, *b),
            _ => {
                return Err(GraphError::Parse {
                    line: i + 1,
                    text: line.to_string(),
                })
            }
        };
        edges.push(edge);
    }
    Ok(edges)
}
