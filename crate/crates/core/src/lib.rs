//! Anomaly detection for sequences of temporal networks.
//!
//! Each snapshot is mapped to a vector of 20 graph features. Every feature
//! series is then modelled with an automatically selected ARIMA model, the
//! one-step residuals are scaled with trimmed statistics and projected to two
//! dimensions with projection-pursuit robust PCA, and finally every time
//! point receives a tail probability from leave-one-out kernel density scores
//! and a generalized Pareto fit. Time points whose probability falls below
//! the significance level are flagged.

pub mod arima;
pub mod embed;
pub mod error;
pub mod experiment;
pub mod features;
pub mod graph;
pub mod io;
pub mod lookout;
pub mod netgen;
pub mod pipeline;
pub mod report;
pub mod residualize;
pub mod stats;

pub use error::{Error, Result};
pub use features::{compute_features, Feature, FeatureMatrix, FeatureVector};
pub use graph::{degree_sequence, DegreeMode, StaticGraph, TemporalNetworkSequence, TimeLabel};
pub use embed::{robust_pca, trimmed_scale, EmbeddedPoints, PcaConfig, ScaledResidualMatrix};
pub use residualize::{residualize_matrix, ColumnFit, ResidualMatrix};
pub use lookout::{fit_gpd, flag_anomalies, lookout, tail_probabilities, AnomalyReport, GpdFit, LookoutConfig};
pub use experiment::{auc, preset, run_experiment, AnomalyMode, ExperimentResult, GeneratorSpec, Model};
pub use pipeline::{detect, detect_from_features, Detection, PipelineConfig};
