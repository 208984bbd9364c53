use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(i64, i64),
    #[error("index {index} violates the grid condition h*index + alpha in Z (alpha = {alpha})")]
    Grid { index: String, alpha: String },
    #[error("weight {weight} < 1 requires mu <= 0, got mu = {mu}")]
    Branch { weight: String, mu: String },
    #[error("group element {0} is not in Gamma0({1})")]
    Membership(String, i64),
    #[error("constant term requires alpha = 0, got alpha = {0}")]
    AlphaNonZero(String),
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
