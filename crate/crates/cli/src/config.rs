//! Flat JSON config file. Keys mirror the long flag names with `-` written
//! as `_`; a flag given on the command line wins over the file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub input: Option<PathBuf>,
    pub format: Option<String>,
    pub nodes: Option<String>,
    pub directed: Option<bool>,
    pub from_features: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub alpha: Option<f64>,
    pub seed: Option<u64>,
    pub k: Option<usize>,
    pub bandwidth_quantile: Option<f64>,
    pub threshold_quantile: Option<f64>,
    pub max_p: Option<usize>,
    pub max_q: Option<usize>,
    pub max_d: Option<usize>,
    pub reps: Option<usize>,
    pub p_star: Option<Vec<f64>>,
    pub anomaly_mode: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }
}

/// The command-line value if present, else the file value.
pub fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}
