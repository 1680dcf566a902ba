//! End-to-end detection: features, ARIMA residuals, robust embedding, lookout.

use serde::Serialize;

use crate::arima::{ArimaConfig, MIN_SERIES_LEN};
use crate::embed::{robust_pca, trimmed_scale, EmbeddedPoints, PcaConfig, ScaledResidualMatrix};
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::graph::TemporalNetworkSequence;
use crate::lookout::{lookout, AnomalyReport, LookoutConfig};
use crate::residualize::{residualize_matrix, ResidualMatrix};

#[derive(Debug, Clone, Serialize)]
pub struct PipelineConfig {
    pub alpha: f64,
    /// Number of robust principal components.
    pub k: usize,
    pub bandwidth_quantile: f64,
    pub threshold_quantile: f64,
    pub arima: ArimaConfig,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            alpha: 0.05,
            k: 2,
            bandwidth_quantile: 0.90,
            threshold_quantile: 0.90,
            arima: ArimaConfig::default(),
            seed: PcaConfig::default().seed,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |name: &str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {v}")))
            }
        };
        open_unit("alpha", self.alpha)?;
        open_unit("bandwidth_quantile", self.bandwidth_quantile)?;
        open_unit("threshold_quantile", self.threshold_quantile)?;
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        Ok(())
    }

    pub fn pca(&self) -> PcaConfig {
        PcaConfig {
            k: self.k,
            seed: self.seed,
            ..PcaConfig::default()
        }
    }

    pub fn lookout(&self) -> LookoutConfig {
        LookoutConfig {
            bandwidth_quantile: self.bandwidth_quantile,
            threshold_quantile: self.threshold_quantile,
            alpha: self.alpha,
        }
    }
}

/// Every intermediate product of one run.
#[derive(Debug, Clone)]
pub struct Detection {
    pub features: FeatureMatrix,
    pub residuals: ResidualMatrix,
    pub scaled: ScaledResidualMatrix,
    pub embedding: EmbeddedPoints,
    pub report: AnomalyReport,
}

/// Runs the whole pipeline on a sequence of snapshots.
pub fn detect(seq: &TemporalNetworkSequence, config: &PipelineConfig) -> Result<Detection> {
    config.validate()?;
    if seq.len() < MIN_SERIES_LEN {
        return Err(Error::SeriesTooShort(seq.len()));
    }
    let features = FeatureMatrix::from_sequence(seq);
    detect_from_features(features, config)
}

/// Runs every stage after feature extraction.
pub fn detect_from_features(features: FeatureMatrix, config: &PipelineConfig) -> Result<Detection> {
    config.validate()?;
    if features.len() < MIN_SERIES_LEN {
        return Err(Error::SeriesTooShort(features.len()));
    }
    let residuals = residualize_matrix(&features, &config.arima).map_err(|e| e.at_stage("time-series modelling"))?;
    let scaled = trimmed_scale(&residuals).map_err(|e| e.at_stage("scaling"))?;
    let embedding = robust_pca(&scaled, &config.pca()).map_err(|e| e.at_stage("robust PCA"))?;
    let report = lookout(&embedding.scores, features.time_labels().to_vec(), &config.lookout())
        .map_err(|e| e.at_stage("lookout"))?;
    Ok(Detection {
        features,
        residuals,
        scaled,
        embedding,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::StaticGraph;

    #[test]
    fn short_sequence_rejected() {
        let seq = TemporalNetworkSequence::from_snapshots(vec![StaticGraph::empty(3, false); 5]).unwrap();
        let err = detect(&seq, &PipelineConfig::default()).unwrap_err();
        assert!(err.to_string().contains("sequence too short for time-series modelling"));
    }

    #[test]
    fn bad_alpha_rejected() {
        let cfg = PipelineConfig {
            alpha: 1.0,
            ..PipelineConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
