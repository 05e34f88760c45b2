use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: cannot parse edge `{text}`")]
    Parse { line: usize, text: String },
    #[error("self edge at `{0}`")]
    SelfEdge(String),
    #[error("semi-directed cycle through `{0}`")]
    SemiDirectedCycle(String),
    #[error("arcs are not allowed in a chain graph: `{0} <-> {1}`")]
    UnexpectedArc(String, String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("query sets overlap at `{0}`")]
    OverlappingSets(String),
    #[error("the {0} vertex set of a separation query is empty")]
    EmptySet(&'static str),
}

pub type Result<T> = std::result::Result<T, GraphError>;
