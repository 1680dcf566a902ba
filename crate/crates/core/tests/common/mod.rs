//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use tempoodd_core::features::FEATURE_COUNT;
use tempoodd_core::StaticGraph;

/// Linear-interpolation quantile written out longhand.
pub fn oracle_quantile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = (v.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    if lo + 1 >= v.len() {
        return Some(v[lo]);
    }
    Some(v[lo] + (h - lo as f64) * (v[lo + 1] - v[lo]))
}

/// Every graph on `n` nodes: undirected over unordered pairs, directed over
/// ordered pairs.
pub fn all_graphs(n: usize, directed: bool) -> impl Iterator<Item = StaticGraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| if directed { u != v } else { u < v })
        .collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        StaticGraph::new(n, edges, directed).unwrap()
    })
}

struct Dense {
    n: usize,
    directed: bool,
    adj: Vec<Vec<bool>>,
    und: Vec<Vec<bool>>,
}

impl Dense {
    fn new(g: &StaticGraph) -> Dense {
        let n = g.node_count();
        let mut adj = vec![vec![false; n]; n];
        let mut und = vec![vec![false; n]; n];
        for &(u, v) in g.edges() {
            adj[u][v] = true;
            und[u][v] = true;
            und[v][u] = true;
            if !g.is_directed() {
                adj[v][u] = true;
            }
        }
        Dense {
            n,
            directed: g.is_directed(),
            adj,
            und,
        }
    }

    /// Floyd-Warshall over the arcs, `None` for unreachable pairs.
    fn distances(&self, keep: &[bool]) -> Vec<Vec<Option<usize>>> {
        let n = self.n;
        let mut d = vec![vec![None; n]; n];
        for u in 0..n {
            if !keep[u] {
                continue;
            }
            d[u][u] = Some(0);
            for v in 0..n {
                if keep[v] && self.adj[u][v] {
                    d[u][v] = Some(1);
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                        if d[i][j].map_or(true, |c| a + b < c) {
                            d[i][j] = Some(a + b);
                        }
                    }
                }
            }
        }
        d
    }

    /// Strongly connected (connected when undirected) on the kept nodes.
    fn connected(&self, keep: &[bool]) -> bool {
        let d = self.distances(keep);
        let nodes: Vec<usize> = (0..self.n).filter(|&v| keep[v]).collect();
        nodes.iter().all(|&u| nodes.iter().all(|&v| d[u][v].is_some()))
    }

    fn und_degree(&self, v: usize) -> usize {
        self.und[v].iter().filter(|&&b| b).count()
    }
}

fn approx(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())),
        _ => false,
    }
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx <= 1e-12 || syy <= 1e-12 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// All 20 features from first principles, in column order.
pub fn oracle_features(g: &StaticGraph) -> [Option<f64>; FEATURE_COUNT] {
    let dense = Dense::new(g);
    let n = dense.n;
    let all = vec![true; n];
    let m = g.edge_count();
    let mut out = [None; FEATURE_COUNT];

    out[0] = Some(n as f64);

    // triangles and triples on the undirected view
    let mut tri = vec![0f64; n];
    let mut triangles = 0usize;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if dense.und[a][b] && dense.und[b][c] && dense.und[a][c] {
                    triangles += 1;
                    tri[a] += 1.0;
                    tri[b] += 1.0;
                    tri[c] += 1.0;
                }
            }
        }
    }
    out[1] = oracle_quantile(&tri, 0.99);

    let out_deg: Vec<usize> = (0..n).map(|u| (0..n).filter(|&v| dense.adj[u][v]).count()).collect();
    let in_deg: Vec<usize> = (0..n).map(|v| (0..n).filter(|&u| dense.adj[u][v]).count()).collect();
    let total: Vec<f64> = (0..n)
        .map(|v| if dense.directed { (out_deg[v] + in_deg[v]) as f64 } else { out_deg[v] as f64 })
        .collect();
    out[2] = oracle_quantile(&total, 0.99);
    out[3] = Some(m as f64);
    let possible = if dense.directed { n * n.saturating_sub(1) } else { n * n.saturating_sub(1) / 2 };
    out[4] = (possible > 0).then(|| m as f64 / possible as f64);

    let triples: usize = (0..n).map(|v| dense.und_degree(v) * dense.und_degree(v).saturating_sub(1) / 2).sum();
    out[5] = (triples > 0).then(|| 3.0 * triangles as f64 / triples as f64);

    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for u in 0..n {
        for v in 0..n {
            if dense.adj[u][v] {
                xs.push(out_deg[u] as f64);
                ys.push(in_deg[v] as f64);
            }
        }
    }
    out[6] = if xs.is_empty() { None } else { pearson(&xs, &ys) };

    let d = dense.distances(&all);
    let (mut sum, mut pairs, mut diam, mut inv) = (0usize, 0usize, 0usize, 0.0);
    let mut high = 0usize;
    for u in 0..n {
        let (mut reached, mut s) = (0usize, 0usize);
        for v in 0..n {
            if u == v {
                continue;
            }
            if let Some(x) = d[u][v] {
                reached += 1;
                s += x;
                diam = diam.max(x);
                inv += 1.0 / x as f64;
            }
        }
        if reached > 0 && reached as f64 / s as f64 >= 0.8 - 1e-12 {
            high += 1;
        }
        sum += s;
        pairs += reached;
    }
    out[7] = (pairs > 0).then(|| sum as f64 / pairs as f64);
    out[8] = Some(diam as f64);
    out[9] = (n > 0).then(|| (0..n).filter(|&v| dense.und_degree(v) == 0).count() as f64 / n as f64);

    // smallest removal set that disconnects or leaves one node
    out[10] = Some(if n < 2 || !dense.connected(&all) {
        0.0
    } else if m == possible {
        (n - 1) as f64
    } else {
        let mut best = n - 1;
        for mask in 0u32..1 << n {
            let removed = mask.count_ones() as usize;
            if removed >= best || n - removed < 2 {
                continue;
            }
            let keep: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 0).collect();
            if !dense.connected(&keep) {
                best = removed;
            }
        }
        best as f64
    });
    out[11] = (n >= 2).then(|| inv / (n * (n - 1)) as f64);

    // weak components by union-find
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for u in 0..n {
        for v in 0..n {
            if dense.und[u][v] {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                parent[a] = b;
            }
        }
    }
    let mut sizes = std::collections::BTreeMap::new();
    for v in 0..n {
        *sizes.entry(find(&mut parent, v)).or_insert(0usize) += 1;
    }
    let comp: Vec<f64> = sizes.values().map(|&s| s as f64).collect();
    out[12] = oracle_quantile(&comp, 0.99);
    out[13] = Some(comp.len() as f64);
    out[14] = (n > 0).then(|| high as f64 / n as f64);

    // betweenness from shortest-path counts
    let mut sigma = vec![vec![0f64; n]; n];
    for s in 0..n {
        sigma[s][s] = 1.0;
        let mut order: Vec<usize> = (0..n).filter(|&v| d[s][v].is_some()).collect();
        order.sort_by_key(|&v| d[s][v]);
        for &v in &order {
            if v == s {
                continue;
            }
            sigma[s][v] = (0..n)
                .filter(|&u| dense.adj[u][v] && d[s][u].is_some() && d[s][u].unwrap() + 1 == d[s][v].unwrap())
                .map(|u| sigma[s][u])
                .sum();
        }
    }
    let mut bc = vec![0f64; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || d[s][t].is_none() || (!dense.directed && t < s) {
                continue;
            }
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                if let (Some(a), Some(b)) = (d[s][v], d[v][t]) {
                    if a + b == d[s][t].unwrap() {
                        bc[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                    }
                }
            }
        }
    }
    out[15] = oracle_quantile(&bc, 0.99);

    // PageRank as a linear system
    if n > 0 {
        let damping = 0.85;
        let mut s = DMatrix::<f64>::zeros(n, n);
        for u in 0..n {
            if out_deg[u] == 0 {
                for v in 0..n {
                    s[(v, u)] = 1.0 / n as f64;
                }
            } else {
                for v in 0..n {
                    if dense.adj[u][v] {
                        s[(v, u)] = 1.0 / out_deg[u] as f64;
                    }
                }
            }
        }
        let system = DMatrix::<f64>::identity(n, n) - s * damping;
        let rhs = DVector::from_element(n, (1.0 - damping) / n as f64);
        let r = system.lu().solve(&rhs).unwrap();
        out[16] = oracle_quantile(r.as_slice(), 0.99);
    }

    let a = DMatrix::<f64>::from_fn(n, n, |i, j| if dense.adj[i][j] { 1.0 } else { 0.0 });
    let top = |m: DMatrix<f64>| -> f64 {
        if n == 0 {
            return 0.0;
        }
        SymmetricEigen::new(m).eigenvalues.iter().copied().fold(0.0, f64::max)
    };
    out[17] = Some(top(&a * a.transpose()));
    out[18] = Some(top(a.transpose() * &a));

    // coreness: best minimum induced degree over node subsets
    let mut core = vec![0f64; n];
    for mask in 1u32..1 << n {
        let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let min_deg = members
            .iter()
            .map(|&u| members.iter().filter(|&&v| dense.und[u][v]).count())
            .min()
            .unwrap();
        for &v in &members {
            core[v] = core[v].max(min_deg as f64);
        }
    }
    out[19] = oracle_quantile(&core, 0.99);
    out
}

/// Compares every feature of `g` with the oracle; returns a description of
/// the first mismatch.
pub fn check_features(g: &StaticGraph) -> Result<(), String> {
    let got = tempoodd_core::compute_features(g);
    let want = oracle_features(g);
    for (i, f) in tempoodd_core::Feature::ALL.iter().enumerate() {
        let tol = if i >= 16 && i <= 18 { 1e-7 } else { 1e-9 };
        if !approx(got.values()[i], want[i], tol) {
            return Err(format!(
                "{f}: got {:?}, oracle {:?} on {} nodes, edges {:?} (directed: {})",
                got.values()[i],
                want[i],
                g.node_count(),
                g.edges(),
                g.is_directed()
            ));
        }
    }
    Ok(())
}

/// AUC by counting every positive/negative pair.
pub fn pairwise_auc(scores: &[f64], labels: &[bool]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for (i, &li) in labels.iter().enumerate() {
        for (j, &lj) in labels.iter().enumerate() {
            if li && !lj {
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
    }
    wins / pairs
}

/// Scaled MAD of the projections of `rows` (after median centring) on `dir`.
pub fn projected_scale(rows: &[Vec<f64>], dir: &[f64]) -> f64 {
    let dim = dir.len();
    let center: Vec<f64> = (0..dim)
        .map(|j| {
            let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            oracle_quantile(&col, 0.5).unwrap()
        })
        .collect();
    let proj: Vec<f64> = rows
        .iter()
        .map(|r| r.iter().zip(&center).zip(dir).map(|((x, c), d)| (x - c) * d).sum())
        .collect();
    let med = oracle_quantile(&proj, 0.5).unwrap();
    let dev: Vec<f64> = proj.iter().map(|p| (p - med).abs()).collect();
    1.4826 * oracle_quantile(&dev, 0.5).unwrap()
}

/// Largest robust scale over a dense grid of directions in 2 or 3 dimensions.
pub fn grid_best_scale(rows: &[Vec<f64>]) -> f64 {
    use std::f64::consts::PI;
    match rows[0].len() {
        2 => (0..20_000)
            .map(|i| {
                let t = PI * i as f64 / 20_000.0;
                projected_scale(rows, &[t.cos(), t.sin()])
            })
            .fold(0.0, f64::max),
        3 => {
            let mut best: f64 = 0.0;
            for i in 0..=400 {
                let theta = PI / 2.0 * i as f64 / 400.0;
                for j in 0..800 {
                    let phi = PI * 2.0 * j as f64 / 800.0;
                    let d = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
                    best = best.max(projected_scale(rows, &d));
                }
            }
            best
        }
        _ => panic!("grid oracle covers 2 or 3 dimensions"),
    }
}

/// Twenty hand-computed interpolation cases: (values, q, expected).
pub fn quantile_cases() -> Vec<(Vec<f64>, f64, f64)> {
    let r: Vec<f64> = (0..100).map(f64::from).collect();
    let five = vec![1.0, 2.0, 3.0, 4.0, 5.0];
    vec![
        (five.clone(), 0.5, 3.0),
        (five.clone(), 0.25, 2.0),
        (five.clone(), 0.1, 1.4),
        (five.clone(), 0.99, 4.96),
        (five.clone(), 0.0, 1.0),
        (five, 1.0, 5.0),
        (vec![10.0], 0.3, 10.0),
        (vec![3.0, 1.0], 0.5, 2.0),
        (vec![3.0, 1.0], 0.75, 2.5),
        (vec![0.0, 10.0, 20.0, 30.0], 0.5, 15.0),
        (vec![30.0, 0.0, 20.0, 10.0], 0.9, 27.0),
        (vec![0.0, 10.0, 20.0, 30.0], 1.0 / 3.0, 10.0),
        (vec![5.0, 5.0, 5.0, 5.0], 0.37, 5.0),
        (vec![-2.0, -1.0, 0.0, 1.0, 2.0], 0.99, 1.96),
        (vec![0.0, 0.0, 0.0, 1.0], 0.99, 0.97),
        (r, 0.99, 98.01),
        (vec![1.0, 2.0], 0.99, 1.99),
        (vec![2.5, -1.5, 0.5], 0.5, 0.5),
        (vec![100.0, 1.0], 0.1, 10.9),
        (vec![25.0, 0.0, 16.0, 1.0, 9.0, 4.0], 0.9, 20.5),
    ]
}

fn gaussian_rows(seed: u64, t: usize, mix: &[Vec<f64>]) -> Vec<Vec<f64>> {
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let dim = mix.len();
    (0..t)
        .map(|_| {
            let z: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            (0..dim).map(|i| mix[i].iter().zip(&z).map(|(a, b)| a * b).sum()).collect()
        })
        .collect()
}

/// Correlated 2-D and 3-D Gaussian clouds, one of them contaminated.
pub fn pca_fixtures() -> Vec<Vec<Vec<f64>>> {
    let mut out = vec![
        gaussian_rows(1, 60, &[vec![2.0, 0.5], vec![0.5, 1.0]]),
        gaussian_rows(2, 80, &[vec![1.0, -1.2], vec![0.3, 0.4]]),
        gaussian_rows(3, 50, &[vec![1.0, 0.2, 0.1], vec![0.8, 1.0, 0.0], vec![0.3, -0.5, 0.4]]),
        gaussian_rows(4, 70, &[vec![3.0, 0.0, 0.0], vec![0.0, 1.0, 0.5], vec![1.0, 0.0, 0.5]]),
    ];
    // heavy contamination along a minor axis
    let mut contaminated = gaussian_rows(5, 60, &[vec![2.0, 0.0], vec![0.0, 0.5]]);
    for r in contaminated.iter_mut().take(6) {
        r[1] += 40.0;
    }
    out.push(contaminated);
    out
}

/// Anisotropic Gaussian rows with a given mixing matrix.
pub fn mixed_gaussian(seed: u64, t: usize, mix: &[Vec<f64>]) -> Vec<Vec<f64>> {
    gaussian_rows(seed, t, mix)
}
