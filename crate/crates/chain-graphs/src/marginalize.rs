//! Latent-variable removal.
//!
//! Removing a vertex set M keeps the separation structure of the remaining
//! vertices by inserting replacement edges before deletion. Two phases
//! generate edges; the first runs once against the input graph, the second
//! runs to a fixed point.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::graph::{pair, ChainMixedGraph};

impl ChainMixedGraph {
    /// Removes the vertices in `m` and returns the mixed graph over the
    /// remaining vertices with the same separation statements.
    ///
    /// Phase one scans collider slides `m -> i -- ... -- o <- j` and
    /// `m -> i -- ... -- o <-> j` with `m` removed: the far endpoint `j` is
    /// joined to `i`, keeping the head type at `j`'s end (`j -> i`
    /// respectively `j <-> i`). Phase two contracts every two-edge path
    /// whose inner vertex is removed, sweeping the seven patterns below in
    /// order until no edge is new, then the removed vertices are deleted.
    ///
    /// ```text
    /// i <- m <- j   =>  i <- j        i <- m -> j   =>  i <-> j
    /// i <- m -- j   =>  i <- j        i <- m <-> j  =>  i <-> j
    /// i <-> m -- j  =>  i <-> j       i -- m -- j   =>  i -- j
    /// i -- m <- j   =>  i <- j
    /// ```
    pub fn marginalize<S: AsRef<str>>(&self, m: &[S]) -> Result<ChainMixedGraph> {
        let m = self.resolve(m)?;
        let n = self.vertices.len();
        let mut und = self.undirected.clone();
        let mut dir = self.directed.clone();
        let mut arc = self.arcs.clone();

        // Phase one, evaluated against the input edge sets only.
        let mut slide_dir = Vec::new();
        let mut slide_arc = Vec::new();
        for &(src, i) in &dir {
            if !m.contains(&src) {
                continue;
            }
            for end in undirected_span(n, &und, i) {
                for &(j, t) in &dir {
                    if t == end && j != i {
                        slide_dir.push((j, i));
                    }
                }
                for &(x, y) in &arc {
                    let j = if x == end {
                        y
                    } else if y == end {
                        x
                    } else {
                        continue;
                    };
                    if j != i {
                        slide_arc.push(pair(i, j));
                    }
                }
            }
        }
        dir.extend(slide_dir);
        arc.extend(slide_arc);

        // Phase two: contract paths through removed inner vertices until
        // nothing is new. Each block collects first so the scan sees one
        // consistent state; the closure is the same either way because
        // additions only enable more additions.
        loop {
            let mut grew = false;

            // i <- m <- j  =>  i <- j
            let mut add = Vec::new();
            for &(mid, i) in &dir {
                if !m.contains(&mid) {
                    continue;
                }
                for &(j, t) in &dir {
                    if t == mid && j != i {
                        add.push((j, i));
                    }
                }
            }
            for e in add {
                grew |= dir.insert(e);
            }

            // i <- m -- j  =>  i <- j
            let mut add = Vec::new();
            for &(mid, i) in &dir {
                if !m.contains(&mid) {
                    continue;
                }
                for j in neighbors(&und, mid) {
                    if j != i {
                        add.push((j, i));
                    }
                }
            }
            for e in add {
                grew |= dir.insert(e);
            }

            // i <-> m -- j  =>  i <-> j
            let mut add = Vec::new();
            for &mid in &m {
                for i in neighbors(&arc, mid) {
                    for j in neighbors(&und, mid) {
                        if j != i {
                            add.push(pair(i, j));
                        }
                    }
                }
            }
            for e in add {
                grew |= arc.insert(e);
            }

            // i <- m -> j  =>  i <-> j
            let mut add = Vec::new();
            for &(mid, i) in &dir {
                if !m.contains(&mid) {
                    continue;
                }
                for &(s, j) in &dir {
                    if s == mid && j != i {
                        add.push(pair(i, j));
                    }
                }
            }
            for e in add {
                grew |= arc.insert(e);
            }

            // i <- m <-> j  =>  i <-> j
            let mut add = Vec::new();
            for &(mid, i) in &dir {
                if !m.contains(&mid) {
                    continue;
                }
                for j in neighbors(&arc, mid) {
                    if j != i {
                        add.push(pair(i, j));
                    }
                }
            }
            for e in add {
                grew |= arc.insert(e);
            }

            // i -- m <- j  =>  i <- j
            let mut add = Vec::new();
            for &mid in &m {
                for i in neighbors(&und, mid) {
                    for &(j, t) in &dir {
                        if t == mid && j != i {
                            add.push((j, i));
                        }
                    }
                }
            }
            for e in add {
                grew |= dir.insert(e);
            }

            // i -- m -- j  =>  i -- j
            let mut add = Vec::new();
            for &mid in &m {
                let around = neighbors(&und, mid);
                for (k, &i) in around.iter().enumerate() {
                    for &j in &around[k + 1..] {
                        add.push(pair(i, j));
                    }
                }
            }
            for e in add {
                grew |= und.insert(e);
            }

            if !grew {
                break;
            }
        }

        // Deletion; the keep list is ascending, so the remap keeps
        // normalized pairs normalized.
        let keep: Vec<usize> = (0..n).filter(|v| !m.contains(v)).collect();
        let mut remap = vec![usize::MAX; n];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let surviving = |set: &BTreeSet<(usize, usize)>| {
            set.iter()
                .filter(|&&(a, b)| remap[a] != usize::MAX && remap[b] != usize::MAX)
                .map(|&(a, b)| (remap[a], remap[b]))
                .collect::<BTreeSet<(usize, usize)>>()
        };
        Ok(ChainMixedGraph {
            vertices: keep.iter().map(|&v| self.vertices[v].clone()).collect(),
            undirected: surviving(&und),
            directed: surviving(&dir),
            arcs: surviving(&arc),
        })
    }
}

fn neighbors(pairs: &BTreeSet<(usize, usize)>, v: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for &(a, b) in pairs {
        if a == v {
            out.push(b);
        } else if b == v {
            out.push(a);
        }
    }
    out
}

/// Vertices reachable from `start` along undirected edges, inclusive.
fn undirected_span(n: usize, und: &BTreeSet<(usize, usize)>, start: usize) -> Vec<usize> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    let mut out = vec![start];
    while let Some(v) = stack.pop() {
        for w in neighbors(und, v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
                out.push(w);
            }
        }
    }
    out
}
