use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node count {0} is too small: p1 models need at least 3 nodes")]
    TooFewNodes(usize),

    #[error("node count {n} exceeds the configured cap {cap} (pass --allow-big / raise the cap to override)")]
    SizeCap { n: usize, cap: usize },

    #[error("network parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("statistic is not in the marginal cone")]
    NotInCone,

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
