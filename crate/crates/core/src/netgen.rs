//! Random graph generators and the toy sequences used in the examples.

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{StaticGraph, TemporalNetworkSequence};

/// Linear schedule from `start` at `t = 1` to `end` at `t = steps`.
pub fn param_schedule(start: f64, end: f64, steps: usize, t: usize) -> f64 {
    if steps < 2 {
        return start;
    }
    start + (end - start) * (t as f64 - 1.0) / (steps as f64 - 1.0)
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {p}")))
    }
}

/// G(n, p): every unordered pair is an edge independently with probability `p`.
pub fn gen_erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<StaticGraph> {
    check_probability("edge probability", p)?;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    StaticGraph::new(n, edges, false)
}

/// Nonlinear preferential attachment grown from a single node.
///
/// Each new node links to `m` distinct existing nodes (fewer while the graph
/// is smaller than `m`), chosen with weights `k^alpha + 1`.
pub fn gen_barabasi_albert<R: Rng + ?Sized>(n: usize, alpha: f64, m: usize, rng: &mut R) -> Result<StaticGraph> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("edges per step must be at least 1".into()));
    }
    let mut degree = vec![0usize; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1) * m);
    for new in 1..n {
        let mut weights: Vec<f64> = degree[..new].iter().map(|&k| (k as f64).powf(alpha) + 1.0).collect();
        for _ in 0..m.min(new) {
            let target = WeightedIndex::new(&weights)
                .map_err(|e| Error::InvalidParameter(format!("attachment weights: {e}")))?
                .sample(rng);
            weights[target] = 0.0;
            edges.push((new, target));
        }
        for &(a, b) in &edges[edges.len() - m.min(new)..] {
            degree[a] += 1;
            degree[b] += 1;
        }
    }
    StaticGraph::new(n, edges, false)
}

/// Ring lattice with `k_ring` neighbours per side; each edge has its far
/// endpoint moved to a uniform valid node with probability `p_rewire`.
pub fn gen_watts_strogatz<R: Rng + ?Sized>(n: usize, k_ring: usize, p_rewire: f64, rng: &mut R) -> Result<StaticGraph> {
    check_probability("rewiring probability", p_rewire)?;
    if k_ring == 0 || 2 * k_ring >= n {
        return Err(Error::InvalidParameter(format!(
            "ring half-degree must satisfy 1 <= k < n/2, got k={k_ring}, n={n}"
        )));
    }
    let mut adj = vec![vec![false; n]; n];
    let mut edges = Vec::with_capacity(n * k_ring);
    for j in 1..=k_ring {
        for u in 0..n {
            let v = (u + j) % n;
            adj[u][v] = true;
            adj[v][u] = true;
            edges.push((u, v));
        }
    }
    let mut degree = vec![2 * k_ring; n];
    for e in edges.iter_mut() {
        let (u, v) = *e;
        if !rng.gen_bool(p_rewire) || degree[u] >= n - 1 {
            continue;
        }
        let w = loop {
            let w = rng.gen_range(0..n);
            if w != u && !adj[u][w] {
                break w;
            }
        };
        adj[u][v] = false;
        adj[v][u] = false;
        adj[u][w] = true;
        adj[w][u] = true;
        degree[v] -= 1;
        degree[w] += 1;
        *e = (u, w);
    }
    StaticGraph::new(n, edges, false)
}

/// Twenty G(N, 0.05) graphs with N drawn from 50..=55, except snapshot
/// `anomaly` (0-based) which uses p = 0.2.
pub fn example_dense_anomaly(seed: u64, len: usize, anomaly: usize) -> Result<TemporalNetworkSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let snapshots = (0..len)
        .map(|t| {
            let n = rng.gen_range(50..=55);
            gen_erdos_renyi(n, if t == anomaly { 0.2 } else { 0.05 }, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    TemporalNetworkSequence::from_snapshots(snapshots)
}

/// Graphs with exactly `edges` uniformly placed edges on N nodes, N drawn
/// from `edges + 1 ..= edges + 6`, except snapshot `anomaly` (0-based) which
/// is a star with the same edge count.
pub fn example_star_anomaly(seed: u64, len: usize, edges: usize, anomaly: usize) -> Result<TemporalNetworkSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let snapshots = (0..len)
        .map(|t| {
            let n = rng.gen_range(edges + 1..=edges + 6);
            if t == anomaly {
                let hub = rng.gen_range(0..n);
                let leaves = (0..n).filter(|&v| v != hub).choose_multiple(&mut rng, edges);
                StaticGraph::new(n, leaves.into_iter().map(|v| (hub, v)), false)
            } else {
                gen_fixed_edges(n, edges, &mut rng)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    TemporalNetworkSequence::from_snapshots(snapshots)
}

/// G(n, M): `m` distinct edges chosen uniformly among all pairs.
pub fn gen_fixed_edges<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<StaticGraph> {
    let total = n * n.saturating_sub(1) / 2;
    if m > total {
        return Err(Error::InvalidParameter(format!("{m} edges do not fit on {n} nodes")));
    }
    let picks = rand::seq::index::sample(rng, total, m);
    // decode pair index k into (u, v), u < v, in row-major order
    let mut edges = Vec::with_capacity(m);
    for k in picks.iter() {
        let mut rem = k;
        let mut u = 0;
        while rem >= n - 1 - u {
            rem -= n - 1 - u;
            u += 1;
        }
        edges.push((u, u + 1 + rem));
    }
    StaticGraph::new(n, edges, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_checkpoints() {
        assert_eq!(param_schedule(0.0, 1.0, 11, 1), 0.0);
        assert_eq!(param_schedule(0.0, 1.0, 11, 11), 1.0);
        assert!((param_schedule(0.05, 0.5, 100, 50) - 0.2727).abs() < 5e-5);
    }

    #[test]
    fn er_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(gen_erdos_renyi(10, 0.0, &mut rng).unwrap().edge_count(), 0);
        assert_eq!(gen_erdos_renyi(10, 1.0, &mut rng).unwrap().edge_count(), 45);
        assert!(gen_erdos_renyi(10, 1.5, &mut rng).is_err());
    }

    #[test]
    fn ba_tree() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = gen_barabasi_albert(50, 1.0, 1, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 49);
    }

    #[test]
    fn ws_lattice() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = gen_watts_strogatz(20, 2, 0.0, &mut rng).unwrap();
        assert!((0..20).all(|v| g.neighbors(v).len() == 4));
        let g = gen_watts_strogatz(20, 2, 0.7, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 40);
    }

    #[test]
    fn fixed_edges_decode() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert_eq!(gen_fixed_edges(6, 15, &mut rng).unwrap().edge_count(), 15);
        assert_eq!(gen_fixed_edges(30, 100, &mut rng).unwrap().edge_count(), 100);
    }

    #[test]
    fn star_example_shape() {
        let seq = example_star_anomaly(9, 20, 100, 7).unwrap();
        assert!(seq.snapshots().iter().all(|g| g.edge_count() == 100));
        let star = &seq.snapshots()[7];
        assert!((0..star.node_count()).any(|v| star.neighbors(v).len() == 100));
    }
}
