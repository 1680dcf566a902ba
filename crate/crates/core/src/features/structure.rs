//! Local structure: triangles, transitivity, degree assortativity, cores and
//! connected components.

use crate::graph::{degree_sequence, DegreeMode, StaticGraph};
use crate::stats::pearson;

fn sorted_intersection_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Number of triangles through each node, ignoring edge direction.
pub fn triangle_counts(g: &StaticGraph) -> Vec<usize> {
    let n = g.node_count();
    let mut counts = vec![0; n];
    for u in 0..n {
        for &v in g.neighbors(u).iter().filter(|&&v| v > u) {
            // each triangle u < v < w is found once, on its (u, v) edge
            let common = g.neighbors(u).iter().filter(|&&w| w > v);
            for &w in common {
                if g.neighbors(v).binary_search(&w).is_ok() {
                    counts[u] += 1;
                    counts[v] += 1;
                    counts[w] += 1;
                }
            }
        }
    }
    counts
}

/// Global clustering coefficient `3 * triangles / connected triples` of the
/// undirected view; `None` when the graph has no connected triple.
pub fn transitivity(g: &StaticGraph) -> Option<f64> {
    let closed: usize = (0..g.node_count())
        .map(|u| {
            g.neighbors(u)
                .iter()
                .map(|&v| sorted_intersection_count(g.neighbors(u), g.neighbors(v)))
                .sum::<usize>()
        })
        .sum();
    // `closed` counts every triangle six times: 3 * triangles * 2 orientations.
    let triples: usize = (0..g.node_count())
        .map(|u| {
            let d = g.neighbors(u).len();
            d * d.saturating_sub(1) / 2
        })
        .sum();
    (triples > 0).then(|| (closed / 2) as f64 / triples as f64)
}

/// Degree assortativity: Pearson correlation between the degrees at the two
/// ends of every edge.
///
/// Undirected edges contribute both orientations. Directed edges pair the
/// source's out-degree with the target's in-degree. `None` when there are no
/// edges or either end has zero degree variance.
pub fn degree_assortativity(g: &StaticGraph) -> Option<f64> {
    if g.edge_count() == 0 {
        return None;
    }
    let (src_deg, dst_deg) = if g.is_directed() {
        (degree_sequence(g, DegreeMode::Out), degree_sequence(g, DegreeMode::In))
    } else {
        let d = degree_sequence(g, DegreeMode::Total);
        (d.clone(), d)
    };
    let mut xs = Vec::with_capacity(2 * g.edge_count());
    let mut ys = Vec::with_capacity(2 * g.edge_count());
    for &(u, v) in g.edges() {
        xs.push(src_deg[u] as f64);
        ys.push(dst_deg[v] as f64);
        if !g.is_directed() {
            xs.push(src_deg[v] as f64);
            ys.push(dst_deg[u] as f64);
        }
    }
    pearson(&xs, &ys)
}

/// Coreness of every node in the undirected view, by repeatedly peeling a
/// node of minimum remaining degree (bucket order, linear time).
pub fn coreness(g: &StaticGraph) -> Vec<usize> {
    let n = g.node_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.neighbors(v).len()).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);

    // Nodes sorted by degree, with bucket starts and each node's position.
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &degree {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    for v in 0..n {
        pos[v] = bin[degree[v]];
        vert[pos[v]] = v;
        bin[degree[v]] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    if max_deg > 0 || n > 0 {
        bin[0] = 0;
    }

    for i in 0..n {
        let v = vert[i];
        for &u in g.neighbors(v) {
            if degree[u] > degree[v] {
                let du = degree[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                bin[du] += 1;
                degree[u] -= 1;
            }
        }
    }
    degree
}

/// Sizes of the weakly connected components, in order of their smallest node.
pub fn component_sizes(g: &StaticGraph) -> Vec<usize> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> StaticGraph {
        StaticGraph::new(n, edges.iter().copied(), false).unwrap()
    }

    #[test]
    fn transitivity_examples() {
        assert_eq!(transitivity(&graph(3, &[(0, 1), (1, 2), (0, 2)])), Some(1.0));
        assert_eq!(transitivity(&graph(3, &[(0, 1), (1, 2)])), Some(0.0));
        // K4 minus (2, 3): triangles {0,1,2} and {0,1,3}; 8 connected triples
        let k4_minus = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(transitivity(&k4_minus), Some(0.75));
        assert_eq!(transitivity(&graph(2, &[(0, 1)])), None);
    }

    #[test]
    fn assortativity_examples() {
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!((degree_assortativity(&star).unwrap() + 1.0).abs() < 1e-12);
        let ring = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(degree_assortativity(&ring), None);
        let p4 = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!((degree_assortativity(&p4).unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn coreness_examples() {
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(coreness(&k4), vec![3, 3, 3, 3]);
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(coreness(&star), vec![1; 5]);
        let tri_pendant = graph(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        assert_eq!(coreness(&tri_pendant), vec![2, 2, 2, 1]);
        assert_eq!(coreness(&StaticGraph::empty(0, false)), Vec::<usize>::new());
    }

    #[test]
    fn triangles_and_components() {
        let tri_pendant = graph(5, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        assert_eq!(triangle_counts(&tri_pendant), vec![1, 1, 1, 0, 0]);
        assert_eq!(component_sizes(&tri_pendant), vec![4, 1]);
    }
}
