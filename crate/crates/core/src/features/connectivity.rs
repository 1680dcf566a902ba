//! Vertex connectivity through unit-capacity max-flow on the vertex-split graph.

use std::collections::VecDeque;

use crate::graph::StaticGraph;

/// Residual network where node `v` becomes `2v` (in) and `2v + 1` (out),
/// joined by a unit-capacity arc; each graph edge `u -> w` becomes an
/// unbounded arc `u_out -> w_in`.
struct SplitNetwork {
    head: Vec<usize>,
    cap: Vec<u32>,
    initial: Vec<u32>,
    adj: Vec<Vec<usize>>,
}

const UNBOUNDED: u32 = u32::MAX / 2;

impl SplitNetwork {
    fn new(g: &StaticGraph) -> Self {
        let n = g.node_count();
        let mut net = SplitNetwork {
            head: Vec::new(),
            cap: Vec::new(),
            initial: Vec::new(),
            adj: vec![Vec::new(); 2 * n],
        };
        for v in 0..n {
            net.add_arc(2 * v, 2 * v + 1, 1);
        }
        for &(u, w) in g.edges() {
            net.add_arc(2 * u + 1, 2 * w, UNBOUNDED);
            if !g.is_directed() {
                net.add_arc(2 * w + 1, 2 * u, UNBOUNDED);
            }
        }
        net.initial = net.cap.clone();
        net
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: u32) {
        self.adj[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(cap);
        self.adj[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
    }

    /// Number of internally vertex-disjoint `s -> t` paths, stopping early once
    /// `limit` paths are found.
    fn local_connectivity(&mut self, s: usize, t: usize, limit: usize) -> usize {
        self.cap.copy_from_slice(&self.initial);
        let source = 2 * s + 1;
        let sink = 2 * t;
        let mut parent_arc = vec![usize::MAX; self.adj.len()];
        let mut queue = VecDeque::new();
        let mut flow = 0;
        while flow < limit {
            parent_arc.fill(usize::MAX);
            queue.clear();
            queue.push_back(source);
            let mut found = false;
            'bfs: while let Some(x) = queue.pop_front() {
                for &a in &self.adj[x] {
                    let y = self.head[a];
                    if self.cap[a] > 0 && y != source && parent_arc[y] == usize::MAX {
                        parent_arc[y] = a;
                        if y == sink {
                            found = true;
                            break 'bfs;
                        }
                        queue.push_back(y);
                    }
                }
            }
            if !found {
                break;
            }
            let mut y = sink;
            while y != source {
                let a = parent_arc[y];
                self.cap[a] -= 1;
                self.cap[a ^ 1] += 1;
                y = self.head[a ^ 1];
            }
            flow += 1;
        }
        flow
    }
}

fn is_connected(g: &StaticGraph, directed: bool) -> bool {
    let n = g.node_count();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            let next = match (directed, forward) {
                (false, _) => g.neighbors(u),
                (true, true) => g.out_neighbors(u),
                (true, false) => g.in_neighbors(u),
            };
            for &w in next {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    };
    if directed {
        reach(true) && reach(false)
    } else {
        reach(true)
    }
}

/// Minimum number of nodes whose removal leaves the graph disconnected (not
/// strongly connected, for directed graphs) or with a single node.
///
/// Complete graphs on `n` nodes give `n - 1`; disconnected graphs and graphs
/// with fewer than two nodes give 0.
pub fn vertex_connectivity(g: &StaticGraph) -> usize {
    let n = g.node_count();
    if n < 2 || !is_connected(g, g.is_directed()) {
        return 0;
    }
    let complete_edges = if g.is_directed() { n * (n - 1) } else { n * (n - 1) / 2 };
    if g.edge_count() == complete_edges {
        return n - 1;
    }
    let mut net = SplitNetwork::new(g);
    if g.is_directed() {
        let mut best = (0..n)
            .map(|v| g.out_neighbors(v).len().min(g.in_neighbors(v).len()))
            .min()
            .unwrap_or(0);
        for u in 0..n {
            for w in 0..n {
                if best == 0 {
                    return 0;
                }
                if u != w && !g.has_edge(u, w) {
                    best = best.min(net.local_connectivity(u, w, best));
                }
            }
        }
        return best;
    }

    // Esfahanian-Hakimi: a minimum-degree node v is either outside some
    // minimum separator, in which case it pairs with a non-neighbour, or
    // inside it, in which case two of its neighbours are separated.
    let v = (0..n).min_by_key(|&v| g.neighbors(v).len()).unwrap();
    let mut best = g.neighbors(v).len();
    for w in 0..n {
        if w != v && !g.has_edge(v, w) {
            best = best.min(net.local_connectivity(v, w, best));
        }
    }
    let nv = g.neighbors(v);
    for (i, &x) in nv.iter().enumerate() {
        for &y in &nv[i + 1..] {
            if !g.has_edge(x, y) {
                best = best.min(net.local_connectivity(x, y, best));
            }
        }
    }
    best
}
