//! Chain graphs, chain mixed graphs, and their separation criteria.
//!
//! A chain graph mixes undirected and directed edges without semi-directed
//! cycles. Conditional independence queries against such a graph go through
//! moralization of an ancestral closure ([`ChainGraph::cg_separates`]).
//! Removing latent vertices ([`ChainMixedGraph::marginalize`]) leaves a
//! graph that additionally carries arcs between vertices that shared a
//! removed influence; queries against mixed graphs enumerate walk states
//! instead ([`ChainMixedGraph::c_separates`]).
//!
//! Graphs read and write a one-edge-per-line text format: `a -- b`,
//! `a -> b`, `a <-> b`.

mod csep;
mod error;
mod graph;
mod marginalize;
mod text;

pub use error::{GraphError, Result};
pub use graph::{ChainGraph, ChainMixedGraph, UndirectedGraph};
pub use text::{parse_edges, Edge};
