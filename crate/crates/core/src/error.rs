use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("part sizes must be ascending, got {0:?}")]
    NotCanonical(Vec<usize>),

    #[error("vertex ({part},{index}) is outside the vertex universe")]
    VertexOutOfRange { part: usize, index: usize },

    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("k = {k} is out of range: {reason}")]
    KOutOfRange { k: usize, reason: String },

    #[error("clique order {t} is out of range: {reason}")]
    CliqueOrder { t: usize, reason: String },

    #[error("uniformity mismatch: {0}")]
    Uniformity(String),

    #[error("vertices ({0},{1}) and ({2},{3}) lie in different parts")]
    CrossPartShift(usize, usize, usize, usize),

    #[error("invalid linear program: {0}")]
    InvalidLp(String),

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("search inconclusive after {nodes} nodes (best lower bound {lower_bound})")]
    Inconclusive { nodes: u64, lower_bound: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
