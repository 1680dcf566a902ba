//! Synthetic experiments: scheduled generators with one spiked snapshot,
//! scored by AUC.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{StaticGraph, TemporalNetworkSequence};
use crate::netgen::{gen_barabasi_albert, gen_erdos_renyi, gen_watts_strogatz, param_schedule};
use crate::pipeline::{detect, PipelineConfig};
use crate::stats::cmp_f64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    ErdosRenyi,
    BarabasiAlbert { m: usize },
    WattsStrogatz { k_ring: usize },
}

/// How the anomaly offset enters the parameter at the anomaly time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AnomalyMode {
    /// The parameter becomes `p_star`.
    Absolute,
    /// The parameter becomes `schedule(t*) + p_star`.
    Additive,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub model: Model,
    pub node_count: usize,
    pub steps: usize,
    pub start: f64,
    pub end: f64,
    /// 1-based time of the spiked snapshot.
    pub anomaly_time: usize,
    pub p_star: f64,
    pub mode: AnomalyMode,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.steps < 2 {
            return bad(format!("a sequence needs at least 2 steps, got {}", self.steps));
        }
        if self.anomaly_time < 1 || self.anomaly_time > self.steps {
            return bad(format!("anomaly time {} outside 1..={}", self.anomaly_time, self.steps));
        }
        let values = [self.start, self.end, self.parameter_at(self.anomaly_time)];
        let ok = match self.model {
            Model::ErdosRenyi | Model::WattsStrogatz { .. } => values.iter().all(|v| (0.0..=1.0).contains(v)),
            Model::BarabasiAlbert { .. } => values.iter().all(|v| *v >= 0.0 && v.is_finite()),
        };
        if !ok {
            return bad(format!("generator parameters out of range: {values:?}"));
        }
        match self.model {
            Model::BarabasiAlbert { m: 0 } => bad("edges per step must be at least 1".into()),
            Model::WattsStrogatz { k_ring } if k_ring == 0 || 2 * k_ring >= self.node_count => {
                bad(format!("ring half-degree {k_ring} invalid for {} nodes", self.node_count))
            }
            _ => Ok(()),
        }
    }

    /// Generator parameter at 1-based time `t`, anomaly included.
    pub fn parameter_at(&self, t: usize) -> f64 {
        let base = param_schedule(self.start, self.end, self.steps, t);
        if t != self.anomaly_time {
            return base;
        }
        match self.mode {
            AnomalyMode::Absolute => self.p_star,
            AnomalyMode::Additive => base + self.p_star,
        }
    }

    fn snapshot(&self, param: f64, rng: &mut ChaCha8Rng) -> Result<StaticGraph> {
        match self.model {
            Model::ErdosRenyi => gen_erdos_renyi(self.node_count, param, rng),
            Model::BarabasiAlbert { m } => gen_barabasi_albert(self.node_count, param, m, rng),
            Model::WattsStrogatz { k_ring } => gen_watts_strogatz(self.node_count, k_ring, param, rng),
        }
    }

    /// Generates the whole sequence from one seed.
    pub fn generate(&self, seed: u64) -> Result<TemporalNetworkSequence> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let snapshots = (1..=self.steps)
            .map(|t| self.snapshot(self.parameter_at(t), &mut rng))
            .collect::<Result<Vec<_>>>()?;
        TemporalNetworkSequence::from_snapshots(snapshots)
    }

    /// One label per time point, true only at the anomaly.
    pub fn labels(&self) -> Vec<bool> {
        (1..=self.steps).map(|t| t == self.anomaly_time).collect()
    }
}

/// Seed of replication `index` derived from the master seed (SplitMix64).
pub fn replication_seed(master: u64, index: usize) -> u64 {
    let mut z = master.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Area under the ROC curve with midrank ties: the probability that a
/// random positive scores above a random negative, ties counting one half.
pub fn auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidParameter("scores and labels differ in length".into()));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| cmp_f64(&scores[a], &scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += order[i..=j].iter().filter(|&&k| labels[k]).count() as f64 * midrank;
        i = j + 1;
    }
    let p = positives as f64;
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * negatives as f64))
}

#[derive(Debug, Clone, Serialize)]
pub struct Replication {
    pub rep: usize,
    pub seed: u64,
    pub auc: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub spec: GeneratorSpec,
    pub replications: Vec<Replication>,
}

impl ExperimentResult {
    /// AUCs of the replications that completed.
    pub fn auc_values(&self) -> Vec<f64> {
        self.replications.iter().filter_map(|r| r.auc).collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Replication> {
        self.replications.iter().filter(|r| r.auc.is_none())
    }
}

fn run_replication(spec: &GeneratorSpec, seed: u64, pipeline: &PipelineConfig) -> Result<f64> {
    let seq = spec.generate(seed)?;
    let detection = detect(&seq, pipeline)?;
    let scores: Vec<f64> = detection.report.probabilities.iter().map(|p| 1.0 - p).collect();
    auc(&scores, &spec.labels())
}

/// Runs `replications` independent sequences through the pipeline.
///
/// A failing replication is kept with its error message instead of an AUC.
pub fn run_experiment(
    spec: &GeneratorSpec,
    replications: usize,
    master_seed: u64,
    pipeline: &PipelineConfig,
) -> Result<ExperimentResult> {
    spec.validate()?;
    pipeline.validate()?;
    let replications = (0..replications)
        .into_par_iter()
        .map(|rep| {
            let seed = replication_seed(master_seed, rep);
            match run_replication(spec, seed, pipeline) {
                Ok(a) => Replication { rep, seed, auc: Some(a), error: None },
                Err(e) => {
                    log::warn!("replication {rep} (seed {seed}) failed: {e}");
                    Replication { rep, seed, auc: None, error: Some(e.to_string()) }
                }
            }
        })
        .collect();
    Ok(ExperimentResult {
        spec: spec.clone(),
        replications,
    })
}

/// A named experiment: one generator design swept over several offsets.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentPreset {
    pub name: &'static str,
    pub spec: GeneratorSpec,
    pub p_stars: Vec<f64>,
}

pub const PRESET_NAMES: [&str; 4] = ["exp1", "exp2", "exp3", "exp4"];

/// The four synthetic experiments: 100 snapshots of 100 nodes, anomaly at t = 50.
pub fn preset(name: &str) -> Result<ExperimentPreset> {
    let spec = |model, start, end, mode| GeneratorSpec {
        model,
        node_count: 100,
        steps: 100,
        start,
        end,
        anomaly_time: 50,
        p_star: 0.0,
        mode,
    };
    let (name, spec, p_stars) = match name {
        "exp1" => ("exp1", spec(Model::ErdosRenyi, 0.05, 0.05, AnomalyMode::Absolute), vec![0.1, 0.15, 0.2, 0.25]),
        "exp2" => ("exp2", spec(Model::ErdosRenyi, 0.05, 0.5, AnomalyMode::Additive), vec![0.05, 0.1, 0.15, 0.2]),
        "exp3" => (
            "exp3",
            spec(Model::BarabasiAlbert { m: 1 }, 1.1, 1.9, AnomalyMode::Additive),
            vec![0.25, 0.3, 0.35, 0.4],
        ),
        "exp4" => (
            "exp4",
            spec(Model::WattsStrogatz { k_ring: 2 }, 0.05, 0.3, AnomalyMode::Additive),
            vec![0.05, 0.1, 0.15, 0.2],
        ),
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown experiment '{other}'; valid names: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(ExperimentPreset { name, spec, p_stars })
}

impl ExperimentPreset {
    /// The generator spec with the given anomaly offset.
    pub fn with_p_star(&self, p_star: f64) -> GeneratorSpec {
        GeneratorSpec {
            p_star,
            ..self.spec.clone()
        }
    }
}
