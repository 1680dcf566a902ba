//! Static graphs and temporal sequences of them.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A simple graph on nodes `0..node_count`.
///
/// Self-loops are dropped and duplicate edges collapsed on construction, so
/// every graph is simple. Undirected edges are stored as `(min, max)`.
/// Graphs are immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticGraph {
    node_count: usize,
    directed: bool,
    edges: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    und_adj: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMode {
    In,
    Out,
    Total,
}

impl StaticGraph {
    /// Builds a graph from an edge list, validating endpoints.
    pub fn new<I>(node_count: usize, edge_list: I, directed: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edge_list {
            if u >= node_count || v >= node_count {
                return Err(Error::EndpointOutOfRange { u, v, node_count });
            }
            if u == v {
                continue;
            }
            let e = if directed { (u, v) } else { (u.min(v), u.max(v)) };
            set.insert(e);
        }
        let edges: Vec<_> = set.into_iter().collect();

        let mut out_adj = vec![Vec::new(); node_count];
        let mut in_adj = vec![Vec::new(); node_count];
        let mut und: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); node_count];
        for &(u, v) in &edges {
            out_adj[u].push(v);
            in_adj[v].push(u);
            und[u].insert(v);
            und[v].insert(u);
        }
        let und_adj: Vec<Vec<usize>> = und.into_iter().map(|s| s.into_iter().collect()).collect();
        if !directed {
            out_adj = und_adj.clone();
            in_adj = und_adj.clone();
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
        }

        Ok(StaticGraph {
            node_count,
            directed,
            edges,
            out_adj,
            in_adj,
            und_adj,
        })
    }

    /// A graph with `node_count` nodes and no edges.
    pub fn empty(node_count: usize, directed: bool) -> Self {
        StaticGraph::new(node_count, std::iter::empty(), directed).expect("no edges to validate")
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Canonical, sorted edge list.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Successors of `v`; all neighbours for undirected graphs.
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    /// Predecessors of `v`; all neighbours for undirected graphs.
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    /// Neighbours of `v` ignoring edge direction.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.und_adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_adj[u].binary_search(&v).is_ok()
    }

    /// The undirected simple graph obtained by forgetting edge direction.
    pub fn symmetrized(&self) -> StaticGraph {
        if !self.directed {
            return self.clone();
        }
        StaticGraph::new(self.node_count, self.edges.iter().copied(), false)
            .expect("endpoints already validated")
    }

    /// Relabels node `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<StaticGraph> {
        if perm.len() != self.node_count {
            return Err(Error::InvalidParameter(format!(
                "permutation has length {}, graph has {} nodes",
                perm.len(),
                self.node_count
            )));
        }
        StaticGraph::new(
            self.node_count,
            self.edges.iter().map(|&(u, v)| (perm[u], perm[v])),
            self.directed,
        )
    }
}

/// Degree of every node. Undirected graphs report the same value for every mode.
pub fn degree_sequence(g: &StaticGraph, mode: DegreeMode) -> Vec<usize> {
    (0..g.node_count())
        .map(|v| {
            if !g.is_directed() {
                return g.neighbors(v).len();
            }
            match mode {
                DegreeMode::In => g.in_neighbors(v).len(),
                DegreeMode::Out => g.out_neighbors(v).len(),
                DegreeMode::Total => g.in_neighbors(v).len() + g.out_neighbors(v).len(),
            }
        })
        .collect()
}

/// Time stamp of one snapshot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(untagged)]
pub enum TimeLabel {
    Int(i64),
    Text(String),
}

impl TimeLabel {
    /// Parses every raw label as an integer if they all parse, otherwise
    /// keeps them as text.
    pub fn parse_all<S: AsRef<str>>(raw: &[S]) -> Vec<TimeLabel> {
        let ints: Option<Vec<i64>> = raw.iter().map(|s| s.as_ref().trim().parse().ok()).collect();
        match ints {
            Some(ints) => ints.into_iter().map(TimeLabel::Int).collect(),
            None => raw
                .iter()
                .map(|s| TimeLabel::Text(s.as_ref().to_string()))
                .collect(),
        }
    }
}

impl PartialOrd for TimeLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TimeLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (TimeLabel::Int(a), TimeLabel::Int(b)) => a.cmp(b),
            (TimeLabel::Text(a), TimeLabel::Text(b)) => a.cmp(b),
            (TimeLabel::Int(_), TimeLabel::Text(_)) => Ordering::Less,
            (TimeLabel::Text(_), TimeLabel::Int(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for TimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeLabel::Int(v) => write!(f, "{v}"),
            TimeLabel::Text(s) => f.write_str(s),
        }
    }
}

/// An ordered sequence of snapshots, the pipeline input.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalNetworkSequence {
    snapshots: Vec<StaticGraph>,
    time_labels: Vec<TimeLabel>,
    directed: bool,
}

impl TemporalNetworkSequence {
    pub fn new(snapshots: Vec<StaticGraph>, time_labels: Vec<TimeLabel>) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::InvalidParameter("a sequence needs at least one snapshot".into()));
        }
        if snapshots.len() != time_labels.len() {
            return Err(Error::InvalidParameter(format!(
                "{} snapshots but {} time labels",
                snapshots.len(),
                time_labels.len()
            )));
        }
        if let Some(i) = time_labels.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::UnorderedTimeLabels(i + 1));
        }
        let directed = snapshots[0].is_directed();
        if snapshots.iter().any(|g| g.is_directed() != directed) {
            return Err(Error::MixedDirectedness);
        }
        Ok(TemporalNetworkSequence {
            snapshots,
            time_labels,
            directed,
        })
    }

    /// Labels snapshots `1..=T`.
    pub fn from_snapshots(snapshots: Vec<StaticGraph>) -> Result<Self> {
        let labels = (1..=snapshots.len() as i64).map(TimeLabel::Int).collect();
        Self::new(snapshots, labels)
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn snapshots(&self) -> &[StaticGraph] {
        &self.snapshots
    }

    pub fn time_labels(&self) -> &[TimeLabel] {
        &self.time_labels
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undirected_duplicate_collapses() {
        let g = StaticGraph::new(3, [(0, 1), (1, 0)], false).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn self_loop_dropped() {
        let g = StaticGraph::new(3, [(0, 0), (0, 1)], false).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn endpoint_out_of_range() {
        let err = StaticGraph::new(2, [(0, 5)], false).unwrap_err();
        assert!(err.to_string().contains("endpoint out of range"), "{err}");
        assert!(err.to_string().contains("(0, 5)"));
    }

    #[test]
    fn directed_keeps_both_orientations() {
        let g = StaticGraph::new(2, [(0, 1), (1, 0)], true).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.symmetrized().edge_count(), 1);
    }

    #[test]
    fn degrees() {
        let k3 = StaticGraph::new(3, [(0, 1), (1, 2), (0, 2)], false).unwrap();
        assert_eq!(degree_sequence(&k3, DegreeMode::Total), vec![2, 2, 2]);
        let star = StaticGraph::new(5, (1..5).map(|i| (0, i)), false).unwrap();
        assert_eq!(degree_sequence(&star, DegreeMode::Total), vec![4, 1, 1, 1, 1]);
        let empty = StaticGraph::empty(3, false);
        assert_eq!(degree_sequence(&empty, DegreeMode::Total), vec![0, 0, 0]);
    }

    #[test]
    fn directed_degree_modes() {
        let g = StaticGraph::new(3, [(0, 1), (0, 2), (1, 2)], true).unwrap();
        assert_eq!(degree_sequence(&g, DegreeMode::Out), vec![2, 1, 0]);
        assert_eq!(degree_sequence(&g, DegreeMode::In), vec![0, 1, 2]);
        let total: usize = degree_sequence(&g, DegreeMode::Total).iter().sum();
        assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn sequence_rejects_unordered_labels() {
        let g = StaticGraph::empty(1, false);
        let err = TemporalNetworkSequence::new(
            vec![g.clone(), g],
            vec![TimeLabel::Int(2), TimeLabel::Int(1)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnorderedTimeLabels(1)));
    }

    #[test]
    fn mixed_labels_parse_as_text() {
        let labels = TimeLabel::parse_all(&["1", "x"]);
        assert_eq!(labels[0], TimeLabel::Text("1".into()));
        let labels = TimeLabel::parse_all(&["10", "9"]);
        assert!(labels[1] < labels[0]);
    }
}
