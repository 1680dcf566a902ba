use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};
use tempoodd_core::features::transitivity;
use tempoodd_core::netgen::{gen_barabasi_albert, gen_erdos_renyi, gen_watts_strogatz, param_schedule};

fn max_degree(g: &tempoodd_core::StaticGraph) -> usize {
    (0..g.node_count()).map(|v| g.neighbors(v).len()).max().unwrap_or(0)
}

#[test]
fn schedule_checkpoints_to_four_places() {
    let r4 = |x: f64| (x * 1e4).round() / 1e4;
    assert_eq!(r4(param_schedule(0.05, 0.5, 100, 50)), 0.2727);
    assert_eq!(r4(param_schedule(1.1, 1.9, 100, 50)), 1.496);
    assert_eq!(r4(param_schedule(0.05, 0.3, 100, 50)), 0.1737);
}

#[test]
fn erdos_renyi_mean_edge_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let counts: Vec<f64> = (0..1000)
        .map(|_| gen_erdos_renyi(100, 0.05, &mut rng).unwrap().edge_count() as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / 1000.0;
    let se = (4950.0f64 * 0.05 * 0.95).sqrt() / 1000f64.sqrt();
    assert!((mean - 247.5).abs() < 3.0 * se, "mean {mean}");
}

#[test]
fn erdos_renyi_edge_count_is_binomial() {
    // n = 5 gives 10 pairs; pool the sparse tails into single cells.
    let (pairs, p, draws) = (10u64, 0.3, 10_000);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut hist = vec![0f64; pairs as usize + 1];
    for _ in 0..draws {
        hist[gen_erdos_renyi(5, p, &mut rng).unwrap().edge_count()] += 1.0;
    }
    let binom = Binomial::new(p, pairs).unwrap();
    let expected: Vec<f64> = (0..=pairs).map(|k| binom.pmf(k) * draws as f64).collect();
    let cells: Vec<(f64, f64)> = vec![
        (hist[..=0].iter().sum(), expected[..=0].iter().sum()),
        (hist[1], expected[1]),
        (hist[2], expected[2]),
        (hist[3], expected[3]),
        (hist[4], expected[4]),
        (hist[5], expected[5]),
        (hist[6..].iter().sum(), expected[6..].iter().sum()),
    ];
    let stat: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let p_value = 1.0 - ChiSquared::new((cells.len() - 1) as f64).unwrap().cdf(stat);
    assert!(p_value > 0.01, "chi-square p = {p_value}");
}

#[test]
fn preferential_attachment_strength_raises_max_degree() {
    let mut wins = 0;
    for seed in 0..500u64 {
        let mut r0 = ChaCha8Rng::seed_from_u64(seed);
        let mut r2 = ChaCha8Rng::seed_from_u64(seed);
        let uniform = max_degree(&gen_barabasi_albert(100, 0.0, 1, &mut r0).unwrap());
        let strong = max_degree(&gen_barabasi_albert(100, 2.0, 1, &mut r2).unwrap());
        if strong > uniform {
            wins += 1;
        }
    }
    // a sign test at any usual level
    assert!(wins > 300, "alpha=2 beat alpha=0 in {wins} of 500 runs");
}

#[test]
fn super_linear_attachment_makes_a_hub() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let hubs = (0..100)
        .filter(|_| max_degree(&gen_barabasi_albert(100, 3.0, 1, &mut rng).unwrap()) as f64 >= 0.5 * 99.0)
        .count();
    assert!(hubs >= 90, "{hubs} of 100 runs");
}

#[test]
fn barabasi_albert_tree() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = gen_barabasi_albert(60, 1.5, 1, &mut rng).unwrap();
    assert_eq!(g.edge_count(), 59);
    assert_eq!(tempoodd_core::features::component_sizes(&g), vec![60]);
}

#[test]
fn rewiring_lowers_clustering() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mean_t = |p: f64, rng: &mut ChaCha8Rng| {
        (0..200)
            .map(|_| transitivity(&gen_watts_strogatz(100, 2, p, rng).unwrap()).unwrap())
            .sum::<f64>()
            / 200.0
    };
    let low = mean_t(0.05, &mut rng);
    let high = mean_t(0.3, &mut rng);
    assert!(low > high, "{low} vs {high}");
}

#[test]
fn lattice_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = gen_watts_strogatz(50, 3, 0.0, &mut rng).unwrap();
    assert!((0..50).all(|v| g.neighbors(v).len() == 6));
    assert_eq!(g.edge_count(), 150);
}
