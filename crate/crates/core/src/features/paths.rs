//! Shortest-path features: distances, efficiency, closeness and betweenness.
//!
//! All of them use unweighted BFS distances. On directed graphs paths
//! follow edge direction, and unreachable pairs are simply skipped
//! (existing-paths convention).

use std::collections::VecDeque;

use crate::graph::StaticGraph;
use crate::stats::quantile;

const UNREACHED: usize = usize::MAX;

fn bfs(g: &StaticGraph, source: usize, dist: &mut [usize], queue: &mut VecDeque<usize>) {
    dist.fill(UNREACHED);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &w in g.out_neighbors(u) {
            if dist[w] == UNREACHED {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
}

/// Summary of all BFS trees of a graph.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct PathSummary {
    pub mean_distance: Option<f64>,
    pub diameter: f64,
    pub global_efficiency: Option<f64>,
    pub closeness: Vec<f64>,
    pub high_closeness: usize,
}

pub(crate) fn path_summary(g: &StaticGraph) -> PathSummary {
    let n = g.node_count();
    let mut dist = vec![UNREACHED; n];
    let mut queue = VecDeque::with_capacity(n);
    let mut total_dist = 0u64;
    let mut reachable_pairs = 0u64;
    let mut diameter = 0usize;
    let mut inv_sum = 0.0;
    let mut closeness = Vec::with_capacity(n);
    let mut high_closeness = 0;
    for s in 0..n {
        bfs(g, s, &mut dist, &mut queue);
        let mut reached = 0u64;
        let mut sum = 0u64;
        for (t, &d) in dist.iter().enumerate() {
            if t == s || d == UNREACHED {
                continue;
            }
            reached += 1;
            sum += d as u64;
            diameter = diameter.max(d);
            inv_sum += 1.0 / d as f64;
        }
        // reached / sum >= 4/5, compared exactly
        if reached > 0 && 5 * reached >= 4 * sum {
            high_closeness += 1;
        }
        reachable_pairs += reached;
        total_dist += sum;
        closeness.push(if reached == 0 {
            0.0
        } else {
            reached as f64 / sum as f64
        });
    }
    PathSummary {
        mean_distance: (reachable_pairs > 0).then(|| total_dist as f64 / reachable_pairs as f64),
        diameter: diameter as f64,
        global_efficiency: (n >= 2).then(|| inv_sum / (n * (n - 1)) as f64),
        closeness,
        high_closeness,
    }
}

/// Mean geodesic length over ordered reachable pairs; `None` if no pair is reachable.
pub fn mean_distance(g: &StaticGraph) -> Option<f64> {
    path_summary(g).mean_distance
}

/// Largest finite geodesic length, 0 for graphs without edges.
pub fn diameter(g: &StaticGraph) -> f64 {
    path_summary(g).diameter
}

/// Mean of `1 / d(u, v)` over ordered pairs, unreachable pairs contributing 0.
pub fn global_efficiency(g: &StaticGraph) -> Option<f64> {
    path_summary(g).global_efficiency
}

/// Closeness of each node: reachable others divided by the sum of distances
/// to them, so every node of a complete graph scores 1 and isolated nodes 0.
pub fn closeness(g: &StaticGraph) -> Vec<f64> {
    path_summary(g).closeness
}

/// Fraction of nodes whose closeness is at least 0.8; 0 for the empty graph.
pub fn closeness_high_proportion(g: &StaticGraph) -> f64 {
    if g.node_count() == 0 {
        return 0.0;
    }
    path_summary(g).high_closeness as f64 / g.node_count() as f64
}

/// Shortest-path betweenness of every node (Brandes' dependency accumulation).
///
/// Undirected graphs count each unordered pair once.
pub fn betweenness(g: &StaticGraph) -> Vec<f64> {
    let n = g.node_count();
    let mut centrality = vec![0.0; n];
    let mut dist = vec![UNREACHED; n];
    let mut sigma = vec![0.0f64; n];
    let mut delta = vec![0.0f64; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        dist.fill(UNREACHED);
        sigma.fill(0.0);
        delta.fill(0.0);
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in g.out_neighbors(u) {
                if dist[w] == UNREACHED {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[u] + 1 {
                    sigma[w] += sigma[u];
                }
            }
        }
        for &w in order.iter().rev() {
            for &v in g.in_neighbors(w) {
                if dist[v] != UNREACHED && dist[v] + 1 == dist[w] {
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
            }
            if w != s {
                centrality[w] += delta[w];
            }
        }
    }
    if !g.is_directed() {
        centrality.iter_mut().for_each(|c| *c /= 2.0);
    }
    centrality
}

/// 99th percentile of node betweenness; 0 for the empty graph.
pub fn betweenness_q99(g: &StaticGraph) -> f64 {
    quantile(&betweenness(g), 0.99).unwrap_or(0.0)
}
