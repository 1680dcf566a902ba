use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the detection pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("endpoint out of range: edge ({u}, {v}) on a graph with {node_count} nodes")]
    EndpointOutOfRange { u: usize, v: usize, node_count: usize },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("no snapshots found in {0}")]
    NoSnapshots(PathBuf),

    #[error("time labels are not strictly increasing at position {0}")]
    UnorderedTimeLabels(usize),

    #[error("snapshots disagree on the directed flag")]
    MixedDirectedness,

    #[error("sequence too short for time-series modelling: T = {0}, need at least 8")]
    SeriesTooShort(usize),

    #[error("series contains non-finite values")]
    NonFinite,

    #[error("feature dropped: every entry is missing")]
    FeatureDropped,

    #[error("only {0} feature columns survived; at least 2 are required")]
    TooFewColumns(usize),

    #[error("no variation: every scaled residual is zero")]
    NoVariation,

    #[error("tail too thin: {0} exceedances above the threshold, need at least 5; lower threshold_quantile")]
    TailTooThin(usize),

    #[error("labels contain a single class; AUC needs both positives and negatives")]
    SingleClass,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Whether the error comes from invalid input or configuration rather
    /// than a numerical failure inside a stage.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::Stage { source, .. } => source.is_usage(),
            Error::EndpointOutOfRange { .. }
            | Error::Parse { .. }
            | Error::NoSnapshots(_)
            | Error::UnorderedTimeLabels(_)
            | Error::MixedDirectedness
            | Error::SeriesTooShort(_)
            | Error::InvalidParameter(_)
            | Error::Io(_)
            | Error::Csv(_)
            | Error::Json(_) => true,
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
