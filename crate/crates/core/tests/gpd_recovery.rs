use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempoodd_core::lookout::{fit_gpd, tail_probabilities, FitMethod};

fn draws(seed: u64, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..10_000).map(|_| f(rng.gen::<f64>())).collect()
}

#[test]
fn exponential_shape_near_zero() {
    let x = draws(1, |u| -(1.0 - u).ln());
    let fit = fit_gpd(&x, 0.9).unwrap();
    assert_eq!(fit.method, FitMethod::Mle);
    assert!(fit.shape.abs() <= 0.1, "{fit:?}");
    assert!((fit.scale - 1.0).abs() < 0.15, "{fit:?}");
}

#[test]
fn uniform_shape_near_minus_one() {
    let x = draws(2, |u| u);
    let fit = fit_gpd(&x, 0.9).unwrap();
    assert!((-1.15..=-0.85).contains(&fit.shape), "{fit:?}");
    // the fitted upper bound lies beyond the threshold
    assert!(fit.threshold - fit.scale / fit.shape > fit.threshold);
}

#[test]
fn pareto_shape_near_half() {
    let x = draws(3, |u| (1.0 - u).powf(-0.5));
    let fit = fit_gpd(&x, 0.9).unwrap();
    assert!((0.35..=0.65).contains(&fit.shape), "{fit:?}");
}

#[test]
fn probabilities_nonincreasing_in_score() {
    let x = draws(4, |u| -(1.0 - u).ln());
    let fit = fit_gpd(&x, 0.9).unwrap();
    let p = tail_probabilities(&x, &fit);
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    for w in idx.windows(2) {
        assert!(p[w[1]] <= p[w[0]] + 1e-15);
    }
    assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
}
