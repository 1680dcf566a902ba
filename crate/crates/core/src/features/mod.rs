//! The 20 graph features and the feature matrix of a sequence.
//!
//! Features that are meaningless on a particular graph (assortativity with
//! constant degrees, transitivity without connected triples, ...) are left
//! undefined rather than zero-filled; imputation happens downstream.

mod connectivity;
mod paths;
mod spectral;
mod structure;

use std::fmt;

use rayon::prelude::*;

pub use connectivity::vertex_connectivity;
pub use paths::{
    betweenness, betweenness_q99, closeness, closeness_high_proportion, diameter,
    global_efficiency, mean_distance,
};
pub use spectral::{pagerank, pagerank_q99, spectral_hub_authority, DEFAULT_DAMPING};
pub use structure::{component_sizes, coreness, degree_assortativity, transitivity, triangle_counts};

use crate::graph::{degree_sequence, DegreeMode, StaticGraph, TemporalNetworkSequence, TimeLabel};
use crate::stats::quantile;

pub const FEATURE_COUNT: usize = 20;

/// Quantile used wherever a per-node distribution is summarised.
pub const SUMMARY_QUANTILE: f64 = 0.99;

/// The features, in their fixed column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feature {
    NodeCount,
    TriangleQ99,
    DegreeQ99,
    EdgeCount,
    EdgeDensity,
    Transitivity,
    Assortativity,
    MeanDistance,
    Diameter,
    IsolatedProportion,
    VertexConnectivity,
    GlobalEfficiency,
    ComponentSizeQ99,
    ComponentCount,
    ClosenessGe080Proportion,
    BetweennessQ99,
    PagerankQ99,
    HubEigenvalue,
    AuthorityEigenvalue,
    CorenessQ99,
}

impl Feature {
    pub const ALL: [Feature; FEATURE_COUNT] = [
        Feature::NodeCount,
        Feature::TriangleQ99,
        Feature::DegreeQ99,
        Feature::EdgeCount,
        Feature::EdgeDensity,
        Feature::Transitivity,
        Feature::Assortativity,
        Feature::MeanDistance,
        Feature::Diameter,
        Feature::IsolatedProportion,
        Feature::VertexConnectivity,
        Feature::GlobalEfficiency,
        Feature::ComponentSizeQ99,
        Feature::ComponentCount,
        Feature::ClosenessGe080Proportion,
        Feature::BetweennessQ99,
        Feature::PagerankQ99,
        Feature::HubEigenvalue,
        Feature::AuthorityEigenvalue,
        Feature::CorenessQ99,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Feature::NodeCount => "node_count",
            Feature::TriangleQ99 => "triangle_q99",
            Feature::DegreeQ99 => "degree_q99",
            Feature::EdgeCount => "edge_count",
            Feature::EdgeDensity => "edge_density",
            Feature::Transitivity => "transitivity",
            Feature::Assortativity => "assortativity",
            Feature::MeanDistance => "mean_distance",
            Feature::Diameter => "diameter",
            Feature::IsolatedProportion => "isolated_proportion",
            Feature::VertexConnectivity => "vertex_connectivity",
            Feature::GlobalEfficiency => "global_efficiency",
            Feature::ComponentSizeQ99 => "component_size_q99",
            Feature::ComponentCount => "component_count",
            Feature::ClosenessGe080Proportion => "closeness_ge_080_proportion",
            Feature::BetweennessQ99 => "betweenness_q99",
            Feature::PagerankQ99 => "pagerank_q99",
            Feature::HubEigenvalue => "hub_eigenvalue",
            Feature::AuthorityEigenvalue => "authority_eigenvalue",
            Feature::CorenessQ99 => "coreness_q99",
        }
    }

    pub fn from_name(name: &str) -> Option<Feature> {
        Feature::ALL.into_iter().find(|f| f.name() == name)
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Feature values of one graph; `None` marks an undefined entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    values: [Option<f64>; FEATURE_COUNT],
}

impl FeatureVector {
    pub fn get(&self, feature: Feature) -> Option<f64> {
        self.values[feature.index()]
    }

    pub fn values(&self) -> &[Option<f64>; FEATURE_COUNT] {
        &self.values
    }

    pub fn is_defined(&self, feature: Feature) -> bool {
        self.values[feature.index()].is_some()
    }
}

fn q99_counts(values: &[usize]) -> Option<f64> {
    let v: Vec<f64> = values.iter().map(|&x| x as f64).collect();
    quantile(&v, SUMMARY_QUANTILE)
}

/// Computes all 20 features of a graph.
pub fn compute_features(g: &StaticGraph) -> FeatureVector {
    let n = g.node_count();
    let m = g.edge_count();
    let undirected = g.symmetrized();
    let total_degree = degree_sequence(g, DegreeMode::Total);
    let possible = if g.is_directed() { n * n.saturating_sub(1) } else { n * n.saturating_sub(1) / 2 };
    let components = component_sizes(g);
    let path = paths::path_summary(g);
    let (hub, authority) = spectral_hub_authority(g);
    let isolated = (0..n).filter(|&v| g.neighbors(v).is_empty()).count();

    let mut values = [None; FEATURE_COUNT];
    let mut set = |f: Feature, v: Option<f64>| values[f.index()] = v;
    set(Feature::NodeCount, Some(n as f64));
    set(Feature::TriangleQ99, q99_counts(&triangle_counts(&undirected)));
    set(Feature::DegreeQ99, q99_counts(&total_degree));
    set(Feature::EdgeCount, Some(m as f64));
    set(Feature::EdgeDensity, (possible > 0).then(|| m as f64 / possible as f64));
    set(Feature::Transitivity, transitivity(&undirected));
    set(Feature::Assortativity, degree_assortativity(g));
    set(Feature::MeanDistance, path.mean_distance);
    set(Feature::Diameter, Some(path.diameter));
    set(Feature::IsolatedProportion, (n > 0).then(|| isolated as f64 / n as f64));
    set(Feature::VertexConnectivity, Some(vertex_connectivity(g) as f64));
    set(Feature::GlobalEfficiency, path.global_efficiency);
    set(Feature::ComponentSizeQ99, q99_counts(&components));
    set(Feature::ComponentCount, Some(components.len() as f64));
    set(
        Feature::ClosenessGe080Proportion,
        (n > 0).then(|| path.high_closeness as f64 / n as f64),
    );
    set(Feature::BetweennessQ99, quantile(&betweenness(g), SUMMARY_QUANTILE));
    set(Feature::PagerankQ99, pagerank_q99(g, DEFAULT_DAMPING));
    set(Feature::HubEigenvalue, Some(hub));
    set(Feature::AuthorityEigenvalue, Some(authority));
    set(Feature::CorenessQ99, q99_counts(&coreness(&undirected)));
    FeatureVector { values }
}

/// A `T x n` matrix of named feature columns with missing entries.
///
/// Rows are time points. The matrix built from a sequence has the 20
/// standard columns, but any named subset (or a matrix read back from CSV)
/// is accepted downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    names: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
    time_labels: Vec<TimeLabel>,
}

impl FeatureMatrix {
    pub fn new(
        names: Vec<String>,
        rows: Vec<Vec<Option<f64>>>,
        time_labels: Vec<TimeLabel>,
    ) -> crate::Result<Self> {
        if rows.len() != time_labels.len() {
            return Err(crate::Error::InvalidParameter(format!(
                "{} rows but {} time labels",
                rows.len(),
                time_labels.len()
            )));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != names.len()) {
            return Err(crate::Error::InvalidParameter(format!(
                "row {} has {} values, expected {}",
                bad + 1,
                rows[bad].len(),
                names.len()
            )));
        }
        Ok(FeatureMatrix {
            names,
            rows,
            time_labels,
        })
    }

    /// Features of every snapshot, computed in parallel.
    pub fn from_sequence(seq: &TemporalNetworkSequence) -> Self {
        let rows: Vec<Vec<Option<f64>>> = seq
            .snapshots()
            .par_iter()
            .map(|g| compute_features(g).values.to_vec())
            .collect();
        FeatureMatrix {
            names: Feature::ALL.iter().map(|f| f.name().to_string()).collect(),
            rows,
            time_labels: seq.time_labels().to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> &[Vec<Option<f64>>] {
        &self.rows
    }

    pub fn time_labels(&self) -> &[TimeLabel] {
        &self.time_labels
    }

    pub fn column(&self, j: usize) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Keeps only the named columns, in the given order.
    pub fn select(&self, names: &[&str]) -> crate::Result<FeatureMatrix> {
        let idx: Vec<usize> = names
            .iter()
            .map(|name| {
                self.names.iter().position(|n| n == name).ok_or_else(|| {
                    crate::Error::InvalidParameter(format!("unknown feature column `{name}`"))
                })
            })
            .collect::<crate::Result<_>>()?;
        Ok(FeatureMatrix {
            names: idx.iter().map(|&j| self.names[j].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| idx.iter().map(|&j| r[j]).collect())
                .collect(),
            time_labels: self.time_labels.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> StaticGraph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        StaticGraph::new(n, edges, false).unwrap()
    }

    #[test]
    fn empty_graph_features() {
        let f = compute_features(&StaticGraph::empty(5, false));
        assert_eq!(f.get(Feature::EdgeDensity), Some(0.0));
        assert_eq!(f.get(Feature::IsolatedProportion), Some(1.0));
        assert_eq!(f.get(Feature::ComponentCount), Some(5.0));
        assert_eq!(f.get(Feature::Transitivity), None);
        assert_eq!(f.get(Feature::Assortativity), None);
        assert_eq!(f.get(Feature::MeanDistance), None);
        assert_eq!(f.get(Feature::PagerankQ99), Some(0.2));
    }

    #[test]
    fn complete_graph_features() {
        let f = compute_features(&complete(5));
        assert_eq!(f.get(Feature::EdgeDensity), Some(1.0));
        assert_eq!(f.get(Feature::Transitivity), Some(1.0));
        assert_eq!(f.get(Feature::Diameter), Some(1.0));
        assert_eq!(f.get(Feature::CorenessQ99), Some(4.0));
        assert_eq!(f.get(Feature::VertexConnectivity), Some(4.0));
        assert_eq!(f.get(Feature::ClosenessGe080Proportion), Some(1.0));
        assert!((f.get(Feature::HubEigenvalue).unwrap() - 16.0).abs() < 1e-9);
    }

    #[test]
    fn triangle_plus_pendant_coreness_q99() {
        let g = StaticGraph::new(4, [(0, 1), (1, 2), (0, 2), (2, 3)], false).unwrap();
        let f = compute_features(&g);
        let expected = quantile(&[2.0, 2.0, 2.0, 1.0], 0.99).unwrap();
        assert_eq!(f.get(Feature::CorenessQ99), Some(expected));
    }

    #[test]
    fn directed_density_uses_ordered_pairs() {
        let g = StaticGraph::new(3, [(0, 1), (1, 0), (1, 2)], true).unwrap();
        let f = compute_features(&g);
        assert_eq!(f.get(Feature::EdgeDensity), Some(0.5));
    }

    #[test]
    fn names_round_trip() {
        for f in Feature::ALL {
            assert_eq!(Feature::from_name(f.name()), Some(f));
        }
        assert_eq!(Feature::ALL[9], Feature::IsolatedProportion);
    }
}
