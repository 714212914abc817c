use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix does not have full rank {0}")]
    RankDeficient(usize),
    #[error("minor {0} vanishes at the given point")]
    ZeroMinor(String),
    #[error("parameters out of range: {0}")]
    Range(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("trip condition violated: {0}")]
    Trip(String),
    #[error("move not applicable: {0}")]
    InvalidMove(String),
    #[error("mutation at frozen vertex {0}")]
    FrozenMutation(String),
    #[error("graph is not balanced: {black} black vs {white} white vertices")]
    Unbalanced { black: usize, white: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
