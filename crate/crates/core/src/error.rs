use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("edge `{edge}` names vertex `{vertex}` which is not in the vertex set")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("{what} count {actual} exceeds the hard limit of {limit}")]
    TooLarge {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("enumeration over {edges} edges exceeds the configured limit of {limit}")]
    EnumerationLimit { edges: usize, limit: usize },
    #[error("k = 0 is only supported for the cycle-matroid baseline; `{0}` needs k >= 1")]
    KZero(&'static str),
    #[error("hypothesis not met: {0}")]
    HypothesisUnmet(String),
    #[error("ground sets differ")]
    GroundMismatch,
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
