use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("label out of range: {label} (n = {n})")]
    LabelOutOfRange { label: usize, n: usize },

    #[error("self-loop on node {0}")]
    SelfLoop(usize),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("node count must be positive")]
    NoNodes,

    #[error("budget must be at least 1")]
    ZeroBudget,

    #[error("edge ({0}, {1}) is not in the graph")]
    MissingEdge(usize, usize),

    #[error("edge ({0}, {1}) is already in the graph")]
    DuplicateEdge(usize, usize),

    #[error("ranking covers {ranked} nodes but graph has {n}")]
    RankingMismatch { ranked: usize, n: usize },

    #[error("path enumeration exceeded {limit} paths")]
    PathLimit { limit: u64 },

    #[error("recursion tree exceeded {limit} vertices")]
    TreeLimit { limit: usize },

    #[error("invalid hash family: {0}")]
    HashFamily(String),
}
