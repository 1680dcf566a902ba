use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use tempoodd_core::arima::{auto_arima, ArimaConfig};
use tempoodd_core::netgen::{gen_barabasi_albert, gen_erdos_renyi};
use tempoodd_core::{compute_features, lookout, LookoutConfig, TimeLabel};

fn features(c: &mut Criterion) {
    let mut group = c.benchmark_group("compute_features");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [50, 100, 200] {
        let er = gen_erdos_renyi(n, 0.1, &mut rng).unwrap();
        group.bench_with_input(BenchmarkId::new("erdos_renyi", n), &er, |b, g| {
            b.iter(|| compute_features(black_box(g)))
        });
        let ba = gen_barabasi_albert(n, 1.5, 1, &mut rng).unwrap();
        group.bench_with_input(BenchmarkId::new("barabasi_albert", n), &ba, |b, g| {
            b.iter(|| compute_features(black_box(g)))
        });
    }
    group.finish();
}

fn arima(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut x = vec![0.0f64; 100];
    for t in 1..x.len() {
        let e: f64 = StandardNormal.sample(&mut rng);
        x[t] = 0.6 * x[t - 1] + e;
    }
    let cfg = ArimaConfig::default();
    c.bench_function("auto_arima/ar1_t100", |b| b.iter(|| auto_arima(black_box(&x), &cfg).unwrap()));
}

fn lookout_scores(c: &mut Criterion) {
    let mut group = c.benchmark_group("lookout");
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for t in [100, 500] {
        let points: Vec<Vec<f64>> = (0..t)
            .map(|_| vec![StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)])
            .collect();
        let labels: Vec<TimeLabel> = (1..=t as i64).map(TimeLabel::Int).collect();
        let cfg = LookoutConfig::default();
        group.bench_with_input(BenchmarkId::from_parameter(t), &points, |b, p| {
            b.iter(|| lookout(black_box(p), labels.clone(), &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, features, arima, lookout_scores);
criterion_main!(benches);
