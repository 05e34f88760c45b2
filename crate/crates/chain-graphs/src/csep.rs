//! Walk-based separation for mixed graphs.
//!
//! A walk traverses edges of any kind in either direction. Its sections are
//! the maximal runs of undirected edges; a section entered and left through
//! an edge end carrying a head (an arrow into the section, or an arc) is a
//! collider section. A walk connects given the conditioning set when every
//! collider section meets the set and every other section avoids it.

use crate::error::{GraphError, Result};
use crate::graph::ChainMixedGraph;

/// How the walk entered the section that the current vertex belongs to.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Entry {
    Start,
    Head,
    Tail,
}

impl ChainMixedGraph {
    /// True iff no walk from `a` to `b` connects given `c`. Walks are
    /// explored as reachable (vertex, section entry, met-the-set) states, so
    /// repetition never needs enumerating.
    pub fn c_separates<A, B, C>(&self, a: &[A], b: &[B], c: &[C]) -> Result<bool>
    where
        A: AsRef<str>,
        B: AsRef<str>,
        C: AsRef<str>,
    {
        let a = self.resolve(a)?;
        let b = self.resolve(b)?;
        let c = self.resolve(c)?;
        for pair in [(&a, &b), (&a, &c), (&b, &c)] {
            if let Some(&v) = pair.0.intersection(pair.1).next() {
                return Err(GraphError::OverlappingSets(self.vertices[v].clone()));
            }
        }
        if a.is_empty() || b.is_empty() {
            return Ok(true);
        }

        let n = self.vertices.len();
        let mut in_b = vec![false; n];
        for &v in &b {
            in_b[v] = true;
        }
        let mut in_c = vec![false; n];
        for &v in &c {
            in_c[v] = true;
        }
        let mut line_adj = vec![Vec::new(); n];
        for &(x, y) in &self.undirected {
            line_adj[x].push(y);
            line_adj[y].push(x);
        }
        // (other end, head at this end, head at the other end)
        let mut break_adj = vec![Vec::new(); n];
        for &(x, y) in &self.directed {
            break_adj[x].push((y, false, true));
            break_adj[y].push((x, true, false));
        }
        for &(x, y) in &self.arcs {
            break_adj[x].push((y, true, true));
            break_adj[y].push((x, true, true));
        }

        let state = |v: usize, entry: Entry, touched: bool| {
            (v * 3 + entry as usize) * 2 + touched as usize
        };
        let mut seen = vec![false; n * 6];
        let mut stack = Vec::new();
        for &v in &a {
            seen[state(v, Entry::Start, false)] = true;
            stack.push((v, Entry::Start, false));
        }
        while let Some((v, entry, touched)) = stack.pop() {
            // Stopping here leaves the current section without a closing
            // head, so it must avoid the conditioning set.
            if in_b[v] && !touched {
                return Ok(false);
            }
            for &w in &line_adj[v] {
                let next = (w, entry, touched || in_c[w]);
                if !seen[state(next.0, next.1, next.2)] {
                    seen[state(next.0, next.1, next.2)] = true;
                    stack.push(next);
                }
            }
            for &(w, head_here, head_there) in &break_adj[v] {
                let collider = entry == Entry::Head && head_here;
                if collider != touched {
                    continue;
                }
                let entry_next = if head_there { Entry::Head } else { Entry::Tail };
                let next = (w, entry_next, in_c[w]);
                if !seen[state(next.0, next.1, next.2)] {
                    seen[state(next.0, next.1, next.2)] = true;
                    stack.push(next);
                }
            }
        }
        Ok(true)
    }
}
