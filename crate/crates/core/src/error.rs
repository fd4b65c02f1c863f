//! Error type shared by every module in the crate.

use thiserror::Error;

/// Errors produced anywhere in the matching pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("node index {index} out of range for graph with {count} nodes")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("attribute kind mismatch: {0}")]
    AttrKindMismatch(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("negative entry {value} at position {index}")]
    NegativeEntry { index: usize, value: f64 },

    #[error("empty point set in Hausdorff distance")]
    EmptySet,

    #[error("empty ground truth assignment")]
    EmptyGroundTruth,

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error(
        "product graph would have {requested} nodes, exceeding the cap of {cap} (max_tpg_nodes)"
    )]
    SizeCapExceeded { requested: usize, cap: usize },

    #[error("linear solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    SolverNonConvergence { iterations: usize, residual: f64 },

    #[error("LP pivot budget of {budget} exhausted")]
    LpIterationLimit { budget: usize },

    #[error("internal LP error: {0}")]
    LpInternal(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Tag an error with the pipeline stage it came from.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The innermost error, unwrapping stage tags.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
