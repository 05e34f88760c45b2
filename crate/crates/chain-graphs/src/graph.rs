//! Graphs with undirected, directed and bidirected edges over labeled
//! vertices, and the moralization-based separation criterion.

use std::collections::BTreeSet;

use crate::error::{GraphError, Result};
use crate::text::{parse_edges, Edge};

/// Graph of undirected and directed edges with no semi-directed cycle: no
/// cycle may combine undirected edges with directed edges that all point the
/// same way around it. Equivalently, the connected components of the
/// undirected skeleton (the chain components) carry no internal directed
/// edge and are partially ordered by the directed edges between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainGraph {
    pub(crate) inner: ChainMixedGraph,
}

/// Graph with undirected and directed edges plus arcs (`<->`). Arcs join
/// vertices that lost a shared influence to marginalization; the
/// no-semi-directed-cycle condition applies to the undirected and directed
/// edges exactly as for [`ChainGraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMixedGraph {
    /// Sorted, unique labels; edge sets index into this list.
    pub(crate) vertices: Vec<String>,
    /// Normalized pairs, first index smaller.
    pub(crate) undirected: BTreeSet<(usize, usize)>,
    /// (from, to) pairs.
    pub(crate) directed: BTreeSet<(usize, usize)>,
    /// Normalized pairs, first index smaller.
    pub(crate) arcs: BTreeSet<(usize, usize)>,
}

/// Plain undirected graph, the result of moralization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    pub(crate) vertices: Vec<String>,
    pub(crate) edges: BTreeSet<(usize, usize)>,
}

pub(crate) fn pair(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Connected-component ids of the undirected skeleton, one per vertex,
/// numbered in order of their smallest member.
pub(crate) fn components(n: usize, undirected: &BTreeSet<(usize, usize)>) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in undirected {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = next;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

impl ChainMixedGraph {
    /// Builds a graph from explicit vertices plus any endpoints appearing in
    /// `edges`. Rejects self edges and semi-directed cycles.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[Edge]) -> Result<ChainMixedGraph> {
        let mut labels: BTreeSet<String> =
            vertices.iter().map(|s| s.as_ref().to_string()).collect();
        for e in edges {
            let (a, b) = e.endpoints();
            labels.insert(a.to_string());
            labels.insert(b.to_string());
        }
        let vertices: Vec<String> = labels.into_iter().collect();
        let index = |label: &str| {
            vertices
                .binary_search_by(|v| v.as_str().cmp(label))
                .expect("endpoint was collected above")
        };
        let mut undirected = BTreeSet::new();
        let mut directed = BTreeSet::new();
        let mut arcs = BTreeSet::new();
        for e in edges {
            let (a, b) = e.endpoints();
            let (a, b) = (index(a), index(b));
            if a == b {
                return Err(GraphError::SelfEdge(vertices[a].clone()));
            }
            match e {
                Edge::Undirected(..) => undirected.insert(pair(a, b)),
                Edge::Directed(..) => directed.insert((a, b)),
                Edge::Arc(..) => arcs.insert(pair(a, b)),
            };
        }
        let graph = ChainMixedGraph {
            vertices,
            undirected,
            directed,
            arcs,
        };
        graph.check_semi_directed()?;
        Ok(graph)
    }

    pub fn from_text(text: &str) -> Result<ChainMixedGraph> {
        let edges = parse_edges(text)?;
        ChainMixedGraph::new::<&str>(&[], &edges)
    }

    /// Arcs do not participate in semi-directed cycles; the check runs on
    /// the undirected skeleton and the directed edges alone.
    fn check_semi_directed(&self) -> Result<()> {
        let n = self.vertices.len();
        let comp = components(n, &self.undirected);
        for &(u, v) in &self.directed {
            if comp[u] == comp[v] {
                return Err(GraphError::SemiDirectedCycle(self.vertices[u].clone()));
            }
        }
        let nc = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut succ = vec![BTreeSet::new(); nc];
        let mut indegree = vec![0usize; nc];
        for &(u, v) in &self.directed {
            if succ[comp[u]].insert(comp[v]) {
                indegree[comp[v]] += 1;
            }
        }
        let mut ready: Vec<usize> = (0..nc).filter(|&c| indegree[c] == 0).collect();
        let mut seen = 0;
        while let Some(c) = ready.pop() {
            seen += 1;
            for &d in &succ[c] {
                indegree[d] -= 1;
                if indegree[d] == 0 {
                    ready.push(d);
                }
            }
        }
        if seen < nc {
            let witness = (0..n)
                .find(|&v| indegree[comp[v]] > 0)
                .expect("a cyclic component has vertices");
            return Err(GraphError::SemiDirectedCycle(self.vertices[witness].clone()));
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn undirected_edges(&self) -> Vec<(String, String)> {
        self.label_pairs(&self.undirected)
    }

    pub fn directed_edges(&self) -> Vec<(String, String)> {
        self.label_pairs(&self.directed)
    }

    pub fn arc_edges(&self) -> Vec<(String, String)> {
        self.label_pairs(&self.arcs)
    }

    pub fn is_arc_free(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Emits the edge lines sorted, one per line with a trailing newline.
    pub fn to_text(&self) -> String {
        let mut lines = Vec::new();
        for &(a, b) in &self.undirected {
            lines.push(format!("{} -- {}", self.vertices[a], self.vertices[b]));
        }
        for &(a, b) in &self.directed {
            lines.push(format!("{} -> {}", self.vertices[a], self.vertices[b]));
        }
        for &(a, b) in &self.arcs {
            lines.push(format!("{} <-> {}", self.vertices[a], self.vertices[b]));
        }
        lines.sort();
        if lines.is_empty() {
            String::new()
        } else {
            lines.join("\n") + "\n"
        }
    }

    fn label_pairs(&self, set: &BTreeSet<(usize, usize)>) -> Vec<(String, String)> {
        set.iter()
            .map(|&(a, b)| (self.vertices[a].clone(), self.vertices[b].clone()))
            .collect()
    }

    pub(crate) fn resolve<S: AsRef<str>>(&self, labels: &[S]) -> Result<BTreeSet<usize>> {
        labels
            .iter()
            .map(|l| {
                let l = l.as_ref();
                self.vertices
                    .binary_search_by(|v| v.as_str().cmp(l))
                    .map_err(|_| GraphError::UnknownVertex(l.to_string()))
            })
            .collect()
    }
}

impl ChainGraph {
    /// Builds a chain graph; arcs are rejected up front.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[Edge]) -> Result<ChainGraph> {
        for e in edges {
            if let Edge::Arc(a, b) = e {
                return Err(GraphError::UnexpectedArc(a.clone(), b.clone()));
            }
        }
        Ok(ChainGraph {
            inner: ChainMixedGraph::new(vertices, edges)?,
        })
    }

    pub fn from_text(text: &str) -> Result<ChainGraph> {
        let edges = parse_edges(text)?;
        ChainGraph::new::<&str>(&[], &edges)
    }

    pub fn vertices(&self) -> &[String] {
        self.inner.vertices()
    }

    pub fn undirected_edges(&self) -> Vec<(String, String)> {
        self.inner.undirected_edges()
    }

    pub fn directed_edges(&self) -> Vec<(String, String)> {
        self.inner.directed_edges()
    }

    pub fn to_text(&self) -> String {
        self.inner.to_text()
    }

    /// The same graph viewed with an empty arc set.
    pub fn to_mixed(&self) -> ChainMixedGraph {
        self.inner.clone()
    }

    /// Connected components of the undirected skeleton, ordered by their
    /// smallest member.
    pub fn chain_components(&self) -> Vec<BTreeSet<String>> {
        let n = self.inner.vertices.len();
        let comp = components(n, &self.inner.undirected);
        let nc = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut out = vec![BTreeSet::new(); nc];
        for v in 0..n {
            out[comp[v]].insert(self.inner.vertices[v].clone());
        }
        out
    }

    /// Drops orientations and connects every two parents of the same chain
    /// component.
    pub fn moralize(&self) -> UndirectedGraph {
        let n = self.inner.vertices.len();
        let edges = moral_edges(n, &self.inner.undirected, &self.inner.directed);
        UndirectedGraph {
            vertices: self.inner.vertices.clone(),
            edges,
        }
    }

    /// Smallest superset of `seed` closed under parents and neighbours.
    pub fn ancestral_closure<S: AsRef<str>>(&self, seed: &[S]) -> Result<BTreeSet<String>> {
        let seed = self.inner.resolve(seed)?;
        Ok(self
            .closure_indices(seed)
            .into_iter()
            .map(|v| self.inner.vertices[v].clone())
            .collect())
    }

    fn closure_indices(&self, seed: BTreeSet<usize>) -> BTreeSet<usize> {
        let mut closed = seed;
        let mut work: Vec<usize> = closed.iter().copied().collect();
        while let Some(v) = work.pop() {
            for &(a, b) in &self.inner.undirected {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if closed.insert(w) {
                    work.push(w);
                }
            }
            for &(u, t) in &self.inner.directed {
                if t == v && closed.insert(u) {
                    work.push(u);
                }
            }
        }
        closed
    }

    /// True iff `s` separates `a` from `b` in the moral graph of the
    /// subgraph induced on the ancestral closure of `a ∪ b ∪ s`.
    pub fn cg_separates<A, B, S>(&self, a: &[A], b: &[B], s: &[S]) -> Result<bool>
    where
        A: AsRef<str>,
        B: AsRef<str>,
        S: AsRef<str>,
    {
        let a = self.inner.resolve(a)?;
        let b = self.inner.resolve(b)?;
        let s = self.inner.resolve(s)?;
        if a.is_empty() {
            return Err(GraphError::EmptySet("first"));
        }
        if b.is_empty() {
            return Err(GraphError::EmptySet("second"));
        }
        for pair in [(&a, &b), (&a, &s), (&b, &s)] {
            if let Some(&v) = pair.0.intersection(pair.1).next() {
                return Err(GraphError::OverlappingSets(self.inner.vertices[v].clone()));
            }
        }

        let mut seed = a.clone();
        seed.extend(&b);
        seed.extend(&s);
        let closure = self.closure_indices(seed);

        // Induce on the closure before moralizing: chain components and
        // parent sets shrink with the subgraph.
        let n = self.inner.vertices.len();
        let undirected: BTreeSet<(usize, usize)> = self
            .inner
            .undirected
            .iter()
            .filter(|(x, y)| closure.contains(x) && closure.contains(y))
            .copied()
            .collect();
        let directed: BTreeSet<(usize, usize)> = self
            .inner
            .directed
            .iter()
            .filter(|(x, y)| closure.contains(x) && closure.contains(y))
            .copied()
            .collect();
        let moral = moral_edges(n, &undirected, &directed);

        let mut adj = vec![Vec::new(); n];
        for &(x, y) in &moral {
            adj[x].push(y);
            adj[y].push(x);
        }
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        for &v in &a {
            seen[v] = true;
            stack.push(v);
        }
        while let Some(v) = stack.pop() {
            if b.contains(&v) {
                return Ok(false);
            }
            for &w in &adj[v] {
                if !seen[w] && !s.contains(&w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        Ok(true)
    }

    /// Latent-marginalization; see [`ChainMixedGraph::marginalize`].
    pub fn marginalize<S: AsRef<str>>(&self, m: &[S]) -> Result<ChainMixedGraph> {
        self.inner.marginalize(m)
    }

    /// Walk-based separation; see [`ChainMixedGraph::c_separates`].
    pub fn c_separates<A, B, C>(&self, a: &[A], b: &[B], c: &[C]) -> Result<bool>
    where
        A: AsRef<str>,
        B: AsRef<str>,
        C: AsRef<str>,
    {
        self.inner.c_separates(a, b, c)
    }
}

fn moral_edges(
    n: usize,
    undirected: &BTreeSet<(usize, usize)>,
    directed: &BTreeSet<(usize, usize)>,
) -> BTreeSet<(usize, usize)> {
    let mut edges: BTreeSet<(usize, usize)> = undirected.clone();
    for &(u, v) in directed {
        edges.insert(pair(u, v));
    }
    let comp = components(n, undirected);
    let nc = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut parents = vec![BTreeSet::new(); nc];
    for &(u, v) in directed {
        parents[comp[v]].insert(u);
    }
    for set in &parents {
        let list: Vec<usize> = set.iter().copied().collect();
        for (i, &x) in list.iter().enumerate() {
            for &y in &list[i + 1..] {
                edges.insert(pair(x, y));
            }
        }
    }
    edges
}

impl UndirectedGraph {
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.vertices[a].clone(), self.vertices[b].clone()))
            .collect()
    }

    /// False when either label is unknown.
    pub fn contains_edge(&self, a: &str, b: &str) -> bool {
        let find = |l: &str| self.vertices.binary_search_by(|v| v.as_str().cmp(l)).ok();
        match (find(a), find(b)) {
            (Some(x), Some(y)) => self.edges.contains(&pair(x, y)),
            _ => false,
        }
    }
}
