//! Power-iteration features: PageRank and the hub/authority eigenvalues.

use crate::graph::StaticGraph;
use crate::stats::quantile;

pub const DEFAULT_DAMPING: f64 = 0.85;
const TOLERANCE: f64 = 1e-10;
const MAX_ITERATIONS: usize = 10_000;

/// PageRank scores with uniform teleportation; dangling nodes spread their
/// mass uniformly. Scores sum to 1.
pub fn pagerank(g: &StaticGraph, damping: f64) -> Vec<f64> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    let uniform = 1.0 / n as f64;
    let mut rank = vec![uniform; n];
    let mut next = vec![0.0; n];
    for _ in 0..MAX_ITERATIONS {
        let dangling: f64 = (0..n)
            .filter(|&v| g.out_neighbors(v).is_empty())
            .map(|v| rank[v])
            .sum();
        let base = (1.0 - damping) * uniform + damping * dangling * uniform;
        for (v, slot) in next.iter_mut().enumerate() {
            let inflow: f64 = g
                .in_neighbors(v)
                .iter()
                .map(|&u| rank[u] / g.out_neighbors(u).len() as f64)
                .sum();
            *slot = base + damping * inflow;
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|r| *r /= total);
        let change: f64 = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if change < TOLERANCE {
            break;
        }
    }
    rank
}

/// 99th percentile of PageRank scores; `None` for a graph without nodes.
pub fn pagerank_q99(g: &StaticGraph, damping: f64) -> Option<f64> {
    quantile(&pagerank(g, damping), 0.99)
}

/// Principal eigenvalue of `B = M M^T` by power iteration, where `M x`
/// sums `x` over `forward` neighbours and `M^T x` over `backward` ones.
fn gram_eigenvalue<'a, F, B>(n: usize, forward: F, backward: B) -> f64
where
    F: Fn(usize) -> &'a [usize],
    B: Fn(usize) -> &'a [usize],
{
    if n == 0 {
        return 0.0;
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut z = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut lambda = 0.0;
    for _ in 0..MAX_ITERATIONS {
        for (j, zj) in z.iter_mut().enumerate() {
            *zj = backward(j).iter().map(|&i| x[i]).sum();
        }
        // Rayleigh quotient x^T B x = |M^T x|^2 for unit x.
        let estimate: f64 = z.iter().map(|v| v * v).sum();
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = forward(i).iter().map(|&j| z[j]).sum();
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        x.iter_mut().zip(&y).for_each(|(xi, yi)| *xi = yi / norm);
        let converged = (estimate - lambda).abs() <= TOLERANCE * estimate.max(1.0);
        lambda = estimate;
        if converged {
            break;
        }
    }
    lambda
}

/// Principal eigenvalues of `A A^T` (hubs) and `A^T A` (authorities).
///
/// The two coincide for undirected graphs, where the value is computed once.
pub fn spectral_hub_authority(g: &StaticGraph) -> (f64, f64) {
    if g.edge_count() == 0 {
        return (0.0, 0.0);
    }
    let n = g.node_count();
    // (A x)_i sums successors of i, (A^T x)_j sums predecessors of j.
    let hub = gram_eigenvalue(n, |v| g.out_neighbors(v), |v| g.in_neighbors(v));
    if !g.is_directed() {
        return (hub, hub);
    }
    let authority = gram_eigenvalue(n, |v| g.in_neighbors(v), |v| g.out_neighbors(v));
    (hub, authority)
}
