use std::io;

use thiserror::Error;

/// Errors raised anywhere in the solver pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("matrix is not symmetric: entry ({row}, {col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },

    #[error("non-positive pivot {pivot:e} at row {index}: matrix is not positive definite")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("pcg breakdown at iteration {iteration}: p'Ap = {curvature:e}, operator is indefinite")]
    Breakdown { iteration: usize, curvature: f64 },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("degenerate element {element}: volume {volume:e}")]
    DegenerateElement { element: usize, volume: f64 },

    #[error("conflicting Dirichlet values at dof {dof}: {first} vs {second}")]
    ConflictingDirichlet { dof: usize, first: f64, second: f64 },

    #[error("no boundary data for marker '{0}'")]
    UnmarkedDirichlet(String),

    #[error("cannot split {elements} elements into {parts} subdomains")]
    TooManySubdomains { parts: usize, elements: usize },

    #[error("subdomain {subdomain}: {source}")]
    Subdomain {
        subdomain: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("interface structure is inconsistent: {0}")]
    InconsistentInterface(String),

    #[error("node {0} is not on the interface")]
    NotOnInterface(usize),

    #[error("coarse matrix asymmetry {0:e} exceeds tolerance")]
    CoarseAsymmetry(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{stage} failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Wraps an error with the name of the pipeline stage that produced it.
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    pub fn in_subdomain(self, subdomain: usize) -> Error {
        Error::Subdomain {
            subdomain,
            source: Box::new(self),
        }
    }
}
