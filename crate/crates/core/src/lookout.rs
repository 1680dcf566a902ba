//! Leave-one-out kernel density scores with a peaks-over-threshold tail model.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::TimeLabel;
use crate::stats::{quantile, sorted};

/// Bandwidth used when every point coincides.
pub const BANDWIDTH_FALLBACK: f64 = 1e-6;
pub const MIN_EXCEEDANCES: usize = 5;
pub const XI_MIN: f64 = -0.95;
pub const XI_MAX: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FitMethod {
    Mle,
    Pwm,
}

/// Generalized Pareto model of score exceedances over `threshold`.
#[derive(Debug, Clone, Serialize)]
pub struct GpdFit {
    pub threshold: f64,
    /// Fraction of scores strictly above the threshold.
    pub exceedance_rate: f64,
    pub scale: f64,
    pub shape: f64,
    pub exceedances: usize,
    pub method: FitMethod,
}

impl GpdFit {
    /// Survival of an exceedance `y >= 0` under the fitted GPD.
    pub fn survival(&self, y: f64) -> f64 {
        let (sigma, xi) = (self.scale, self.shape);
        if xi.abs() < 1e-12 {
            return (-y / sigma).exp();
        }
        let z = 1.0 + xi * y / sigma;
        if z <= 0.0 {
            0.0
        } else {
            z.powf(-1.0 / xi)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LookoutConfig {
    /// Quantile of the positive MST edge lengths used as bandwidth.
    pub bandwidth_quantile: f64,
    /// Quantile of the scores used as the tail threshold.
    pub threshold_quantile: f64,
    pub alpha: f64,
}

impl Default for LookoutConfig {
    fn default() -> Self {
        LookoutConfig {
            bandwidth_quantile: 0.90,
            threshold_quantile: 0.90,
            alpha: 0.05,
        }
    }
}

/// Per-time outcome of the detector.
#[derive(Debug, Clone, Serialize)]
pub struct AnomalyReport {
    pub time_labels: Vec<TimeLabel>,
    pub outlier_scores: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub flags: Vec<bool>,
    pub alpha: f64,
    pub bandwidth: f64,
    pub gpd: GpdFit,
}

impl AnomalyReport {
    /// Indices of the flagged time points.
    pub fn flagged(&self) -> Vec<usize> {
        self.flags
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| f.then_some(i))
            .collect()
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Edge lengths of the Euclidean minimum spanning tree (Prim, dense).
pub fn mst_edge_lengths(points: &[Vec<f64>]) -> Vec<f64> {
    let n = points.len();
    if n < 2 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut lengths = Vec::with_capacity(n - 1);
    in_tree[0] = true;
    let mut last = 0;
    for _ in 1..n {
        let mut next = usize::MAX;
        let mut next_d = f64::INFINITY;
        for j in 0..n {
            if in_tree[j] {
                continue;
            }
            let d = sq_dist(&points[last], &points[j]);
            if d < best[j] {
                best[j] = d;
            }
            if best[j] < next_d || next == usize::MAX {
                next_d = best[j];
                next = j;
            }
        }
        in_tree[next] = true;
        lengths.push(next_d.sqrt());
        last = next;
    }
    lengths
}

/// KDE bandwidth from 0-dimensional persistence: the interpolated
/// `q`-quantile of the positive MST edge lengths.
pub fn persistence_bandwidth(points: &[Vec<f64>], q: f64) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "bandwidth selection needs at least 3 points, got {}",
            points.len()
        )));
    }
    let positive: Vec<f64> = mst_edge_lengths(points).into_iter().filter(|&d| d > 0.0).collect();
    match quantile(&positive, q) {
        Some(h) if h > 0.0 && h.is_finite() => Ok(h),
        _ => {
            log::warn!("all embedded points coincide; using bandwidth {BANDWIDTH_FALLBACK}");
            Ok(BANDWIDTH_FALLBACK)
        }
    }
}

/// Negative log leave-one-out Gaussian kernel density at every point.
pub fn loo_kde_scores(points: &[Vec<f64>], h: f64) -> Vec<f64> {
    let t = points.len();
    if t < 2 {
        return vec![0.0; t];
    }
    let dim = points[0].len() as f64;
    let norm = (2.0 * std::f64::consts::PI * h * h).powf(-dim / 2.0);
    let inv = 1.0 / (2.0 * h * h);
    (0..t)
        .into_par_iter()
        .map(|i| {
            let sum: f64 = (0..t)
                .filter(|&j| j != i)
                .map(|j| (-sq_dist(&points[i], &points[j]) * inv).exp())
                .sum();
            let density = norm * sum / (t - 1) as f64;
            -(density + 1e-300).ln()
        })
        .collect()
}

/// GPD log-likelihood of exceedances `y` (all > 0).
fn gpd_loglik(y: &[f64], sigma: f64, xi: f64) -> f64 {
    if !(sigma > 0.0) {
        return f64::NEG_INFINITY;
    }
    let k = y.len() as f64;
    if xi.abs() < 1e-9 {
        return -k * sigma.ln() - y.iter().sum::<f64>() / sigma;
    }
    let mut acc = 0.0;
    for &v in y {
        let z = 1.0 + xi * v / sigma;
        if z <= 0.0 {
            return f64::NEG_INFINITY;
        }
        acc += z.ln();
    }
    -k * sigma.ln() - (1.0 + 1.0 / xi) * acc
}

/// Golden-section maximisation of `f` on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Grid search followed by golden-section refinement in the best cell.
fn grid_then_golden(f: &impl Fn(f64) -> f64, grid: &[f64], iters: usize) -> (f64, f64) {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] || (values[best].is_nan() && !v.is_nan()) {
            best = i;
        }
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (x, fx) = golden_max(f, lo, hi, iters);
    if fx >= values[best] {
        (x, fx)
    } else {
        (grid[best], values[best])
    }
}

/// Profile maximum over the scale for a fixed shape.
fn profile_scale(y: &[f64], xi: f64, y_mean: f64, y_max: f64) -> (f64, f64) {
    let mut lo = y_mean * 1e-3;
    if xi < 0.0 {
        lo = lo.max(-xi * y_max * (1.0 + 1e-9));
    }
    let hi = (y_mean * 1e3).max(lo * 10.0);
    let (llo, lhi) = (lo.ln(), hi.ln());
    let grid: Vec<f64> = (0..=80).map(|i| llo + (lhi - llo) * i as f64 / 80.0).collect();
    let f = |ls: f64| gpd_loglik(y, ls.exp(), xi);
    let (ls, ll) = grid_then_golden(&f, &grid, 60);
    (ls.exp(), ll)
}

fn mle_fit(y: &[f64]) -> Option<(f64, f64)> {
    let y_mean = y.iter().sum::<f64>() / y.len() as f64;
    let y_max = y.iter().copied().fold(0.0, f64::max);
    if !(y_mean > 0.0) || !y_mean.is_finite() {
        return None;
    }
    let profile = |xi: f64| profile_scale(y, xi, y_mean, y_max).1;
    let grid: Vec<f64> = (0..=59).map(|i| XI_MIN + (XI_MAX - XI_MIN) * i as f64 / 59.0).collect();
    let (xi, ll) = grid_then_golden(&profile, &grid, 50);
    if !ll.is_finite() {
        return None;
    }
    let (sigma, _) = profile_scale(y, xi, y_mean, y_max);
    (sigma > 0.0 && sigma.is_finite()).then_some((sigma, xi))
}

/// Probability-weighted-moment estimates of (scale, shape).
pub fn pwm_fit(y: &[f64]) -> (f64, f64) {
    let ys = sorted(y);
    let k = ys.len() as f64;
    let a0 = ys.iter().sum::<f64>() / k;
    let a1 = ys
        .iter()
        .enumerate()
        .map(|(j, v)| (k - 1.0 - j as f64) / (k - 1.0).max(1.0) * v)
        .sum::<f64>()
        / k;
    let denom = a0 - 2.0 * a1;
    let mut xi = if denom > 0.0 { 2.0 - a0 / denom } else { XI_MAX };
    xi = xi.clamp(XI_MIN, XI_MAX);
    let mut sigma = if denom > 0.0 { 2.0 * a0 * a1 / denom } else { a0 };
    let y_max = ys.last().copied().unwrap_or(0.0);
    if xi < 0.0 {
        sigma = sigma.max(-xi * y_max * (1.0 + 1e-6));
    }
    if !(sigma > 0.0) {
        sigma = a0.max(f64::MIN_POSITIVE);
    }
    (sigma, xi)
}

/// Fits a GPD to the scores exceeding their `threshold_quantile` quantile.
pub fn fit_gpd(scores: &[f64], threshold_quantile: f64) -> Result<GpdFit> {
    if !(threshold_quantile > 0.0 && threshold_quantile < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold_quantile must lie in (0, 1), got {threshold_quantile}"
        )));
    }
    let u = quantile(scores, threshold_quantile).ok_or(Error::TailTooThin(0))?;
    let y: Vec<f64> = scores.iter().filter(|&&s| s > u).map(|s| s - u).collect();
    if y.len() < MIN_EXCEEDANCES {
        return Err(Error::TailTooThin(y.len()));
    }
    let (scale, shape, method) = match mle_fit(&y) {
        Some((s, x)) => (s, x, FitMethod::Mle),
        None => {
            let (s, x) = pwm_fit(&y);
            (s, x, FitMethod::Pwm)
        }
    };
    Ok(GpdFit {
        threshold: u,
        exceedance_rate: y.len() as f64 / scores.len() as f64,
        scale,
        shape,
        exceedances: y.len(),
        method,
    })
}

/// Tail probability of each score.
///
/// Above the threshold the GPD survival is scaled by the exceedance rate;
/// below it the empirical survival fraction is used, floored at the rate.
pub fn tail_probabilities(scores: &[f64], fit: &GpdFit) -> Vec<f64> {
    let t = scores.len() as f64;
    let ordered = sorted(scores);
    scores
        .iter()
        .map(|&s| {
            if s > fit.threshold {
                (fit.exceedance_rate * fit.survival(s - fit.threshold)).clamp(0.0, 1.0)
            } else {
                let above = ordered.len() - ordered.partition_point(|&v| v <= s);
                (above as f64 / t).max(fit.exceedance_rate)
            }
        })
        .collect()
}

/// `true` where the probability is strictly below `alpha`.
pub fn flag_anomalies(probabilities: &[f64], alpha: f64) -> Vec<bool> {
    probabilities.iter().map(|&p| p < alpha).collect()
}

/// Threshold quantile actually used for `t` scores: lowered when needed so
/// that at least [`MIN_EXCEEDANCES`] points lie above it.
pub fn effective_threshold_quantile(q: f64, t: usize) -> f64 {
    if t == 0 {
        return q;
    }
    q.min(1.0 - MIN_EXCEEDANCES as f64 / t as f64)
}

/// Scores, tail probabilities and flags for embedded points.
pub fn lookout(points: &[Vec<f64>], time_labels: Vec<TimeLabel>, config: &LookoutConfig) -> Result<AnomalyReport> {
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {}", config.alpha)));
    }
    if time_labels.len() != points.len() {
        return Err(Error::InvalidParameter("one time label per point required".into()));
    }
    let bandwidth = persistence_bandwidth(points, config.bandwidth_quantile)?;
    let scores = loo_kde_scores(points, bandwidth);
    let q = effective_threshold_quantile(config.threshold_quantile, scores.len());
    if q < config.threshold_quantile {
        log::info!("threshold quantile lowered to {q:.3} for {} points", scores.len());
    }
    let gpd = fit_gpd(&scores, q)?;
    let probabilities = tail_probabilities(&scores, &gpd);
    let flags = flag_anomalies(&probabilities, config.alpha);
    Ok(AnomalyReport {
        time_labels,
        outlier_scores: scores,
        probabilities,
        flags,
        alpha: config.alpha,
        bandwidth,
        gpd,
    })
}
