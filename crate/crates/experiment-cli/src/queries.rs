use chain_graphs::{parse_edges, ChainGraph, ChainMixedGraph, Edge, GraphError};

use crate::error::{CliError, Result};

const NO_EXTRA: &[&str] = &[];

/// Runs a query script: edge lines accumulate a graph, query lines answer
/// against everything accumulated so far. `marginalize v...` prints the
/// reduced graph's edge lines; `csep A | B | C` and `cgsep A | B | C` print
/// `true` or `false`. Set elements separate on commas or spaces; the third
/// set may be empty or absent. `cgsep` routes through moralization and
/// rejects graphs holding bidirected edges.
pub fn run_graph_queries(text: &str) -> Result<String> {
    let mut edges: Vec<Edge> = Vec::new();
    let mut output = String::new();
    for (index, raw) in text.lines().enumerate() {
        let n = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = keyword(line, "marginalize") {
            let hidden = names(rest);
            let graph = ChainMixedGraph::new(NO_EXTRA, &edges)?;
            output.push_str(&graph.marginalize(&hidden)?.to_text());
            continue;
        }
        if let Some(rest) = keyword(line, "cgsep") {
            let (a, b, c) = sets(rest, n)?;
            let graph = ChainGraph::new(NO_EXTRA, &edges)?;
            push_answer(&mut output, graph.cg_separates(&a, &b, &c)?);
            continue;
        }
        if let Some(rest) = keyword(line, "csep") {
            let (a, b, c) = sets(rest, n)?;
            let graph = ChainMixedGraph::new(NO_EXTRA, &edges)?;
            push_answer(&mut output, graph.c_separates(&a, &b, &c)?);
            continue;
        }
        match parse_edges(line) {
            Ok(mut parsed) => edges.append(&mut parsed),
            Err(GraphError::Parse { text, .. }) => {
                return Err(GraphError::Parse { line: n, text }.into())
            }
            Err(other) => return Err(other.into()),
        }
    }
    Ok(output)
}

fn push_answer(output: &mut String, separated: bool) {
    output.push_str(if separated { "true\n" } else { "false\n" });
}

fn keyword<'a>(line: &'a str, word: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(word)?;
    if rest.is_empty() || rest.starts_with(char::is_whitespace) {
        Some(rest)
    } else {
        None
    }
}

fn names(part: &str) -> Vec<String> {
    part.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

fn sets(rest: &str, line: usize) -> Result<(Vec<String>, Vec<String>, Vec<String>)> {
    let parts: Vec<&str> = rest.split('|').collect();
    if parts.len() < 2 || parts.len() > 3 {
        return Err(CliError::Config(format!(
            "line {line}: expected two or three sets separated by '|'"
        )));
    }
    let c = parts.get(2).map(|p| names(p)).unwrap_or_default();
    Ok((names(parts[0]), names(parts[1]), c))
}
