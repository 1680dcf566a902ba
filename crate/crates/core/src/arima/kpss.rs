//! KPSS level-stationarity test and the differencing order it implies.

/// 5% critical value of the KPSS level-stationarity statistic.
pub const KPSS_CRITICAL_5PCT: f64 = 0.463;

pub(crate) fn is_constant(x: &[f64]) -> bool {
    let (lo, hi) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    x.is_empty() || hi - lo <= 1e-12 * (1.0 + hi.abs().max(lo.abs()))
}

pub(crate) fn difference(x: &[f64]) -> Vec<f64> {
    x.windows(2).map(|w| w[1] - w[0]).collect()
}

/// KPSS statistic for level stationarity with a Bartlett-weighted long-run
/// variance using `trunc(3 sqrt(n) / 13)` lags.
pub fn kpss_statistic(x: &[f64]) -> f64 {
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    let nf = n as f64;
    let m = x.iter().sum::<f64>() / nf;
    let e: Vec<f64> = x.iter().map(|v| v - m).collect();
    let mut partial = 0.0;
    let mut eta = 0.0;
    for &r in &e {
        partial += r;
        eta += partial * partial;
    }
    eta /= nf * nf;
    let lags = (3.0 * nf.sqrt() / 13.0) as usize;
    let mut s2 = e.iter().map(|r| r * r).sum::<f64>() / nf;
    for lag in 1..=lags.min(n - 1) {
        let w = 1.0 - lag as f64 / (lags as f64 + 1.0);
        let cov: f64 = e[lag..].iter().zip(&e[..n - lag]).map(|(a, b)| a * b).sum();
        s2 += 2.0 * w * cov / nf;
    }
    if s2 <= 0.0 {
        return 0.0;
    }
    eta / s2
}

/// Number of differences needed for KPSS to stop rejecting stationarity at
/// the 5% level, capped at `max_d`.
pub fn ndiffs(x: &[f64], max_d: usize) -> usize {
    let mut series = x.to_vec();
    let mut d = 0;
    while d < max_d && series.len() > 2 && !is_constant(&series) {
        if kpss_statistic(&series) < KPSS_CRITICAL_5PCT {
            break;
        }
        series = difference(&series);
        d += 1;
    }
    d
}
