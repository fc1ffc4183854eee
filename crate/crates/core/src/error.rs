use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("grid with side {side} in dimension {dim} exceeds the supported point count")]
    GridTooLarge { side: usize, dim: usize },

    #[error("{0} is not a perfect {1}-th power")]
    NotPerfectPower(usize, usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),

    #[error("mapping is not a bijection on 0..{0}")]
    NotBijection(usize),

    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("instance too large for exhaustive search: n = {n} > {max}")]
    TooLarge { n: usize, max: usize },

    #[error("point set is not a grid")]
    NotGrid,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
