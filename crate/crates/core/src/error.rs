use thiserror::Error;

use crate::report::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} out of range")]
    InvalidVertex(usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("malformed graph:\n{0}")]
    MalformedGraph(ValidationReport),

    #[error("invalid morphism:\n{0}")]
    InvalidMorphism(ValidationReport),

    #[error("invalid Prym structure:\n{0}")]
    InvalidPrym(ValidationReport),

    #[error("base graph is not semi-stable: {0}")]
    Unstable(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("weight {0} is not an even integer >= 2")]
    BadWeight(i64),

    #[error("no nonzero cusp form up to weight {0}")]
    NoCuspForm(i64),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
