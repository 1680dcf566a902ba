//! Automatic ARIMA modelling of a single feature series.
//!
//! The differencing order comes from repeated KPSS tests. The AR and MA
//! orders are chosen by a stepwise AICc search (Hyndman-Khandakar style)
//! around the starting set `(2,2), (0,0), (1,0), (0,1)`, toggling the
//! constant as well. Coefficients maximise the exact Gaussian likelihood
//! computed by a Kalman filter, with the AR and MA polynomials
//! reparametrised through partial autocorrelations so every candidate is
//! stationary and invertible.

mod kalman;
mod kpss;

use std::collections::HashMap;

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::neldermead::NelderMead;
use nalgebra::DMatrix;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::stats::{mean, median};

pub use kpss::{kpss_statistic, ndiffs, KPSS_CRITICAL_5PCT};
use kpss::{difference, is_constant};

/// Shortest series that is modelled; shorter ones get a mean-only model.
pub const MIN_SERIES_LEN: usize = 8;

/// Floor applied to the innovation variance.
pub const SIGMA2_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct ArimaConfig {
    pub max_p: usize,
    pub max_q: usize,
    pub max_d: usize,
    /// Stepwise search; when false every `(p, q)` up to the caps is fitted.
    pub stepwise: bool,
    pub max_optimizer_iters: u64,
}

impl Default for ArimaConfig {
    fn default() -> Self {
        ArimaConfig {
            max_p: 5,
            max_q: 5,
            max_d: 2,
            stepwise: true,
            max_optimizer_iters: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
}

/// A fitted ARIMA(p, d, q) model.
///
/// The constant is the mean of the series when `d = 0` and the drift of the
/// differenced series when `d = 1`; it is never included for `d = 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArimaModel {
    pub order: ArimaOrder,
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    pub constant: Option<f64>,
    pub sigma2: f64,
    pub log_likelihood: f64,
    pub aicc: f64,
}

impl ArimaModel {
    /// White noise around the sample mean; used for short or constant series.
    pub fn mean_only(series: &[f64]) -> ArimaModel {
        let m = if series.is_empty() { 0.0 } else { mean(series) };
        let n = series.len() as f64;
        let sigma2 = if series.is_empty() {
            SIGMA2_FLOOR
        } else {
            (series.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n).max(SIGMA2_FLOOR)
        };
        let log_likelihood = -0.5 * n * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0);
        ArimaModel {
            order: ArimaOrder { p: 0, d: 0, q: 0 },
            ar: Vec::new(),
            ma: Vec::new(),
            constant: Some(m),
            sigma2,
            log_likelihood,
            aicc: aicc(log_likelihood, 2, series.len()),
        }
    }

    /// Number of estimated parameters, the innovation variance included.
    pub fn parameter_count(&self) -> usize {
        self.ar.len() + self.ma.len() + usize::from(self.constant.is_some()) + 1
    }
}

fn aicc(log_likelihood: f64, k: usize, n: usize) -> f64 {
    let aic = -2.0 * log_likelihood + 2.0 * k as f64;
    if n > k + 1 {
        aic + 2.0 * (k * (k + 1)) as f64 / (n - k - 1) as f64
    } else {
        f64::INFINITY
    }
}

/// Maps unconstrained values to the coefficients of a stationary AR
/// polynomial via partial autocorrelations (Durbin-Levinson recursion).
fn pacf_to_coefficients(raw: &[f64]) -> Vec<f64> {
    let mut coef: Vec<f64> = raw.iter().map(|r| r.tanh()).collect();
    let mut work = coef.clone();
    for j in 1..coef.len() {
        let a = coef[j];
        for k in 0..j {
            work[k] -= a * coef[j - k - 1];
        }
        coef[..j].copy_from_slice(&work[..j]);
    }
    coef
}

/// Replaces missing entries with the median of the observed ones.
pub fn impute_series(values: &[Option<f64>]) -> Result<Vec<f64>> {
    let observed: Vec<f64> = values.iter().flatten().copied().collect();
    let fill = median(&observed).ok_or(Error::FeatureDropped)?;
    Ok(values.iter().map(|v| v.unwrap_or(fill)).collect())
}

struct ArmaProblem<'a> {
    w: &'a [f64],
    p: usize,
    q: usize,
    constant: bool,
    center: f64,
    scale: f64,
}

struct ArmaFit {
    ar: Vec<f64>,
    ma: Vec<f64>,
    mu: f64,
    sigma2: f64,
    log_likelihood: f64,
}

impl ArmaProblem<'_> {
    fn unpack(&self, params: &[f64]) -> (Vec<f64>, Vec<f64>, f64) {
        let ar = pacf_to_coefficients(&params[..self.p]);
        let ma: Vec<f64> = pacf_to_coefficients(&params[self.p..self.p + self.q])
            .into_iter()
            .map(|c| -c)
            .collect();
        let mu = if self.constant {
            self.center + self.scale * params[self.p + self.q]
        } else {
            0.0
        };
        (ar, ma, mu)
    }

    /// Concentrated likelihood: returns (log-likelihood, sigma^2).
    fn evaluate(&self, ar: &[f64], ma: &[f64], mu: f64) -> Option<(f64, f64)> {
        let y: Vec<f64> = self.w.iter().map(|v| v - mu).collect();
        let inn = kalman::innovations(&y, ar, ma)?;
        let n = y.len() as f64;
        let ssq: f64 = inn
            .errors
            .iter()
            .zip(&inn.variances)
            .map(|(v, f)| v * v / f)
            .sum();
        let sigma2 = (ssq / n).max(SIGMA2_FLOOR);
        let log_det: f64 = inn.variances.iter().map(|f| f.ln()).sum();
        let ll = -0.5 * n * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0) - 0.5 * log_det;
        ll.is_finite().then_some((ll, sigma2))
    }
}

impl CostFunction for ArmaProblem<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, params: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let (ar, ma, mu) = self.unpack(params);
        Ok(self.evaluate(&ar, &ma, mu).map_or(1e300, |(ll, _)| -ll))
    }
}

/// Maximum-likelihood ARMA(p, q) fit of the (already differenced) series.
fn fit_arma(w: &[f64], p: usize, q: usize, constant: bool, max_iters: u64) -> Option<ArmaFit> {
    let center = mean(w);
    let spread = crate::stats::std_dev(w);
    let problem = || ArmaProblem {
        w,
        p,
        q,
        constant,
        center,
        scale: if spread > 0.0 { spread } else { 1.0 },
    };
    let dim = p + q + usize::from(constant);
    if p + q == 0 {
        // White noise: the sample mean is the exact maximiser.
        return finish(&problem(), &vec![0.0; dim]);
    }
    let start = vec![0.0; dim];
    let mut simplex = vec![start.clone()];
    for i in 0..dim {
        let mut v = start.clone();
        v[i] += 0.2;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex).with_sd_tolerance(1e-9).ok()?;
    let result = Executor::new(problem(), solver)
        .configure(|state| state.max_iters(max_iters))
        .run()
        .ok()?;
    let best = result.state().get_best_param()?.clone();
    finish(&problem(), &best)
}

fn finish(problem: &ArmaProblem<'_>, params: &[f64]) -> Option<ArmaFit> {
    let (ar, ma, mu) = problem.unpack(params);
    let (log_likelihood, sigma2) = problem.evaluate(&ar, &ma, mu)?;
    Some(ArmaFit {
        ar,
        ma,
        mu,
        sigma2,
        log_likelihood,
    })
}

fn difference_n(x: &[f64], d: usize) -> Vec<f64> {
    (0..d).fold(x.to_vec(), |acc, _| difference(&acc))
}

/// Fits an ARIMA model of the given order; `None` if the optimiser fails.
pub fn fit_arima(
    series: &[f64],
    order: ArimaOrder,
    constant: bool,
    config: &ArimaConfig,
) -> Option<ArimaModel> {
    let w = difference_n(series, order.d);
    let constant = constant && order.d <= 1;
    let fit = fit_arma(&w, order.p, order.q, constant, config.max_optimizer_iters)?;
    let k = order.p + order.q + usize::from(constant) + 1;
    Some(ArimaModel {
        order,
        ar: fit.ar,
        ma: fit.ma,
        constant: constant.then_some(fit.mu),
        sigma2: fit.sigma2,
        log_likelihood: fit.log_likelihood,
        aicc: aicc(fit.log_likelihood, k, w.len()),
    })
}

/// Smallest root modulus a selected model may have in its AR or MA polynomial.
pub const MIN_ROOT_MODULUS: f64 = 1.01;

/// Spectral radius of the companion matrix of `1 - c_1 z - ... - c_k z^k`,
/// the reciprocal of the smallest root modulus.
fn companion_radius(c: &[f64]) -> f64 {
    let k = c.len();
    if k == 0 {
        return 0.0;
    }
    let m = DMatrix::from_fn(k, k, |i, j| {
        if i == 0 {
            c[j]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Rejects fits whose AR or MA roots sit at (or numerically near) the unit
/// circle; such fits trade a spurious likelihood gain for a degenerate model.
fn roots_clear_of_unit_circle(m: &ArimaModel) -> bool {
    let neg_ma: Vec<f64> = m.ma.iter().map(|t| -t).collect();
    companion_radius(&m.ar) * MIN_ROOT_MODULUS < 1.0 && companion_radius(&neg_ma) * MIN_ROOT_MODULUS < 1.0
}

/// Selects and fits an ARIMA model automatically.
///
/// Series shorter than [`MIN_SERIES_LEN`] and constant series get a
/// mean-only model.
pub fn auto_arima(series: &[f64], config: &ArimaConfig) -> Result<ArimaModel> {
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if series.len() < MIN_SERIES_LEN || is_constant(series) {
        return Ok(ArimaModel::mean_only(series));
    }
    let d = ndiffs(series, config.max_d);
    let allow_constant = d <= 1;

    let mut fitted: HashMap<(usize, usize, bool), Option<ArimaModel>> = HashMap::new();
    let mut try_fit = |p: usize, q: usize, c: bool| -> Option<ArimaModel> {
        if p > config.max_p || q > config.max_q || (c && !allow_constant) {
            return None;
        }
        fitted
            .entry((p, q, c))
            .or_insert_with(|| {
                fit_arima(series, ArimaOrder { p, d, q }, c, config)
                    .filter(|m| m.aicc.is_finite() && roots_clear_of_unit_circle(m))
            })
            .clone()
    };

    let better = |candidate: &Option<ArimaModel>, best: &Option<ArimaModel>| match (candidate, best) {
        (Some(c), Some(b)) => c.aicc < b.aicc - 1e-9,
        (Some(_), None) => true,
        _ => false,
    };

    let mut best: Option<ArimaModel> = None;
    if config.stepwise {
        let mut starts = vec![(2, 2, allow_constant), (0, 0, allow_constant), (1, 0, allow_constant), (0, 1, allow_constant)];
        if allow_constant {
            starts.push((0, 0, false));
        }
        for (p, q, c) in starts {
            let m = try_fit(p, q, c);
            if better(&m, &best) {
                best = m;
            }
        }
        loop {
            let Some(current) = best.clone() else { break };
            let (p, q) = (current.order.p as i64, current.order.q as i64);
            let c = current.constant.is_some();
            let moves: [(i64, i64, bool); 9] = [
                (p - 1, q, c),
                (p + 1, q, c),
                (p, q - 1, c),
                (p, q + 1, c),
                (p - 1, q - 1, c),
                (p + 1, q + 1, c),
                (p - 1, q + 1, c),
                (p + 1, q - 1, c),
                (p, q, !c),
            ];
            let mut improved = false;
            for (np, nq, nc) in moves {
                if np < 0 || nq < 0 {
                    continue;
                }
                let m = try_fit(np as usize, nq as usize, nc);
                if better(&m, &best) {
                    best = m;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
    } else {
        for p in 0..=config.max_p {
            for q in 0..=config.max_q {
                for c in [true, false] {
                    let m = try_fit(p, q, c);
                    if better(&m, &best) {
                        best = m;
                    }
                }
            }
        }
    }
    Ok(best.unwrap_or_else(|| ArimaModel::mean_only(series)))
}

/// One-step in-sample residuals `x_t - x̂_t` of a fitted model.
///
/// The first `d` residuals have no prediction and are set to zero.
pub fn residuals(model: &ArimaModel, series: &[f64]) -> Vec<f64> {
    let d = model.order.d;
    if series.len() <= d {
        return vec![0.0; series.len()];
    }
    let w = difference_n(series, d);
    let mu = model.constant.unwrap_or(0.0);
    if is_constant(&w) && (w.first().copied().unwrap_or(0.0) - mu).abs() <= 1e-12 * (1.0 + mu.abs()) {
        return vec![0.0; series.len()];
    }
    let y: Vec<f64> = w.iter().map(|v| v - mu).collect();
    let errors = kalman::innovations(&y, &model.ar, &model.ma)
        .map(|inn| inn.errors)
        .unwrap_or(y);
    let mut out = vec![0.0; d];
    out.extend(errors);
    out
}

/// Ljung-Box portmanteau test on residuals: returns the statistic and its
/// p-value with `lag - fitted_params` degrees of freedom.
pub fn ljung_box(residuals: &[f64], lag: usize, fitted_params: usize) -> (f64, f64) {
    let n = residuals.len();
    if n <= lag + 1 {
        return (0.0, 1.0);
    }
    let m = mean(residuals);
    let e: Vec<f64> = residuals.iter().map(|v| v - m).collect();
    let denom: f64 = e.iter().map(|v| v * v).sum();
    if denom <= 0.0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let stat = nf
        * (nf + 2.0)
        * (1..=lag)
            .map(|k| {
                let r: f64 = e[k..].iter().zip(&e[..n - k]).map(|(a, b)| a * b).sum::<f64>() / denom;
                r * r / (nf - k as f64)
            })
            .sum::<f64>();
    let df = lag.saturating_sub(fitted_params).max(1) as f64;
    let p = ChiSquared::new(df).map_or(f64::NAN, |chi| 1.0 - chi.cdf(stat));
    (stat, p)
}
