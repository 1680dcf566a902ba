//! Feature matrix to ARIMA residual matrix.

use rayon::prelude::*;
use serde::Serialize;

use crate::arima::{auto_arima, impute_series, ljung_box, residuals, ArimaConfig, ArimaModel, MIN_SERIES_LEN};
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::graph::TimeLabel;
use crate::stats::variance;

/// Lag used for the Ljung-Box whiteness diagnostic.
pub const LJUNG_BOX_LAG: usize = 10;

/// Per-column model diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct ColumnFit {
    pub name: String,
    pub model: ArimaModel,
    pub residual_variance: f64,
    pub ljung_box: f64,
    pub ljung_box_p: f64,
    pub imputed: usize,
}

/// One-step residuals of every surviving feature column.
#[derive(Debug, Clone)]
pub struct ResidualMatrix {
    columns: Vec<Vec<f64>>,
    imputed: Vec<Vec<bool>>,
    fits: Vec<ColumnFit>,
    dropped: Vec<String>,
    time_labels: Vec<TimeLabel>,
}

impl ResidualMatrix {
    /// Builds a matrix directly from residual columns, without fitted models.
    pub fn from_columns(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        let t = columns.first().map_or(0, Vec::len);
        if names.len() != columns.len() || columns.iter().any(|c| c.len() != t) {
            return Err(Error::InvalidParameter("ragged residual columns".into()));
        }
        let fits = names
            .into_iter()
            .zip(&columns)
            .map(|(name, col)| ColumnFit {
                name,
                model: ArimaModel::mean_only(&[]),
                residual_variance: variance(col),
                ljung_box: f64::NAN,
                ljung_box_p: f64::NAN,
                imputed: 0,
            })
            .collect();
        Ok(ResidualMatrix {
            imputed: vec![vec![false; t]; columns.len()],
            columns,
            fits,
            dropped: Vec::new(),
            time_labels: (1..=t as i64).map(TimeLabel::Int).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.time_labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time_labels.is_empty()
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn names(&self) -> Vec<&str> {
        self.fits.iter().map(|f| f.name.as_str()).collect()
    }

    /// `true` where the feature value was missing and imputed.
    pub fn imputed_mask(&self) -> &[Vec<bool>] {
        &self.imputed
    }

    pub fn fits(&self) -> &[ColumnFit] {
        &self.fits
    }

    /// Columns with no observed value at all.
    pub fn dropped(&self) -> &[String] {
        &self.dropped
    }

    pub fn time_labels(&self) -> &[TimeLabel] {
        &self.time_labels
    }

    /// Residual vector of time point `t`.
    pub fn row(&self, t: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[t]).collect()
    }
}

/// Imputes, models and residualizes every column of `fm`.
///
/// Columns are fitted independently (in parallel); the result does not
/// depend on scheduling.
pub fn residualize_matrix(fm: &FeatureMatrix, config: &ArimaConfig) -> Result<ResidualMatrix> {
    let t = fm.len();
    if t < MIN_SERIES_LEN {
        return Err(Error::SeriesTooShort(t));
    }
    let outcomes: Vec<Result<Option<(Vec<f64>, Vec<bool>, ColumnFit)>>> = (0..fm.column_count())
        .into_par_iter()
        .map(|j| {
            let raw = fm.column(j);
            let series = match impute_series(&raw) {
                Ok(s) => s,
                Err(Error::FeatureDropped) => return Ok(None),
                Err(e) => return Err(e),
            };
            let model = auto_arima(&series, config)?;
            let resid = residuals(&model, &series);
            let (lb, lb_p) = ljung_box(&resid, LJUNG_BOX_LAG, model.ar.len() + model.ma.len());
            let mask: Vec<bool> = raw.iter().map(Option::is_none).collect();
            let fit = ColumnFit {
                name: fm.names()[j].clone(),
                residual_variance: variance(&resid),
                ljung_box: lb,
                ljung_box_p: lb_p,
                imputed: mask.iter().filter(|&&m| m).count(),
                model,
            };
            Ok(Some((resid, mask, fit)))
        })
        .collect();

    let mut columns = Vec::new();
    let mut imputed = Vec::new();
    let mut fits = Vec::new();
    let mut dropped = Vec::new();
    for (j, outcome) in outcomes.into_iter().enumerate() {
        match outcome? {
            Some((c, m, f)) => {
                columns.push(c);
                imputed.push(m);
                fits.push(f);
            }
            None => dropped.push(fm.names()[j].clone()),
        }
    }
    if columns.len() < 2 {
        return Err(Error::TooFewColumns(columns.len()));
    }
    Ok(ResidualMatrix {
        columns,
        imputed,
        fits,
        dropped,
        time_labels: fm.time_labels().to_vec(),
    })
}
