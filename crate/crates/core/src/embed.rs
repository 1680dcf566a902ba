//! Trimmed scaling of residuals and projection-pursuit robust PCA.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::residualize::ResidualMatrix;
use crate::stats::{cmp_f64, mean, quantile, std_dev, MAD_SCALE};

pub const TRIM_LOWER: f64 = 0.025;
pub const TRIM_UPPER: f64 = 0.975;
/// Trimmed standard deviations below this zero-fill their column.
pub const SCALE_FLOOR: f64 = 1e-12;

/// Residuals standardised column by column with trimmed statistics.
#[derive(Debug, Clone)]
pub struct ScaledResidualMatrix {
    pub names: Vec<String>,
    pub columns: Vec<Vec<f64>>,
    pub trimmed_means: Vec<f64>,
    pub trimmed_sds: Vec<f64>,
    /// Columns whose trimmed sd fell below [`SCALE_FLOOR`] and were zero-filled.
    pub flagged: Vec<bool>,
}

impl ScaledResidualMatrix {
    pub fn len(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.len())
            .map(|t| self.columns.iter().map(|c| c[t]).collect())
            .collect()
    }
}

/// Mean and sample sd of the values lying between the 2.5% and 97.5%
/// quantiles of `column`, boundaries included.
pub fn trimmed_stats(column: &[f64]) -> (f64, f64) {
    let lo = quantile(column, TRIM_LOWER).unwrap_or(0.0);
    let hi = quantile(column, TRIM_UPPER).unwrap_or(0.0);
    let kept: Vec<f64> = column.iter().copied().filter(|v| *v >= lo && *v <= hi).collect();
    if kept.is_empty() {
        return (0.0, 0.0);
    }
    (mean(&kept), std_dev(&kept))
}

/// Scales every residual column as `(e - trimmed_mean) / trimmed_sd`.
///
/// Trimming only affects the statistics: extreme entries are still scaled
/// and stay in the output.
pub fn trimmed_scale(rm: &ResidualMatrix) -> Result<ScaledResidualMatrix> {
    if rm.len() < crate::arima::MIN_SERIES_LEN {
        return Err(Error::SeriesTooShort(rm.len()));
    }
    let mut out = ScaledResidualMatrix {
        names: rm.names().into_iter().map(str::to_string).collect(),
        columns: Vec::with_capacity(rm.columns().len()),
        trimmed_means: Vec::new(),
        trimmed_sds: Vec::new(),
        flagged: Vec::new(),
    };
    for col in rm.columns() {
        let (mu, sd) = trimmed_stats(col);
        let flagged = !(sd >= SCALE_FLOOR);
        out.columns.push(if flagged {
            vec![0.0; col.len()]
        } else {
            col.iter().map(|v| (v - mu) / sd).collect()
        });
        out.trimmed_means.push(mu);
        out.trimmed_sds.push(sd);
        out.flagged.push(flagged);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct PcaConfig {
    /// Number of components.
    pub k: usize,
    pub random_directions: usize,
    pub refinement_rounds: usize,
    /// Angles tried on each side of the current direction per refinement plane.
    pub half_grid: usize,
    pub seed: u64,
}

impl Default for PcaConfig {
    fn default() -> Self {
        PcaConfig {
            k: 2,
            random_directions: 360,
            refinement_rounds: 3,
            half_grid: 20,
            seed: 0x5eed,
        }
    }
}

/// Low-dimensional robust projection of the scaled residuals.
#[derive(Debug, Clone, Serialize)]
pub struct EmbeddedPoints {
    /// `T x k` scores.
    pub scores: Vec<Vec<f64>>,
    /// `k` orthonormal directions of length `n`.
    pub directions: Vec<Vec<f64>>,
    pub center: Vec<f64>,
    /// MAD-based spread of each score column.
    pub robust_scales: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> bool {
    let norm = dot(v, v).sqrt();
    if norm < 1e-12 {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    true
}

/// Removes the components of `v` along each (orthonormal) basis vector.
fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dot(v, b);
        v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
    }
}

/// Scaled MAD of the projections of `data` on `direction`.
fn projected_mad(data: &[Vec<f64>], direction: &[f64], buf: &mut Vec<f64>) -> f64 {
    buf.clear();
    buf.extend(data.iter().map(|row| dot(row, direction)));
    MAD_SCALE * median_absolute_deviation(buf)
}

fn median_in_place(buf: &mut [f64]) -> f64 {
    let n = buf.len();
    let mid = n / 2;
    let (_, upper, _) = buf.select_nth_unstable_by(mid, cmp_f64);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let lower = buf[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}

fn median_absolute_deviation(buf: &mut [f64]) -> f64 {
    if buf.is_empty() {
        return 0.0;
    }
    let m = median_in_place(buf);
    buf.iter_mut().for_each(|v| *v = (*v - m).abs());
    median_in_place(buf)
}

/// Projection-pursuit robust PCA on the rows of `srm`.
///
/// The data are centred at the coordinatewise median. Each direction
/// maximises the scaled MAD of the projected data: the best of the
/// normalised data points and a seeded set of random unit vectors is refined
/// by grid searches over shrinking arcs of great circles through the
/// coordinate axes and the strongest candidates. Later directions are
/// searched in the orthogonal complement of earlier ones.
pub fn robust_pca(srm: &ScaledResidualMatrix, config: &PcaConfig) -> Result<EmbeddedPoints> {
    robust_pca_rows(&srm.rows(), config)
}

/// [`robust_pca`] on a plain row-major data set.
pub fn robust_pca_rows(rows: &[Vec<f64>], config: &PcaConfig) -> Result<EmbeddedPoints> {
    let t = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let k = config.k;
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "cannot extract {k} components from {n} columns"
        )));
    }
    if t < k + 2 {
        return Err(Error::SeriesTooShort(t));
    }
    if rows.iter().flatten().all(|&v| v == 0.0) {
        return Err(Error::NoVariation);
    }

    let center: Vec<f64> = (0..n)
        .map(|j| {
            let mut col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            median_in_place(&mut col)
        })
        .collect();
    let data: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().zip(&center).map(|(v, c)| v - c).collect())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let random: Vec<Vec<f64>> = (0..config.random_directions)
        .map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect())
        .collect();

    let mut buf = Vec::with_capacity(t);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut scales = Vec::with_capacity(k);
    for _ in 0..k {
        let mut candidates: Vec<(f64, Vec<f64>)> = data
            .iter()
            .chain(random.iter())
            .filter_map(|v| {
                let mut c = v.clone();
                project_out(&mut c, &basis);
                normalize(&mut c).then(|| (projected_mad(&data, &c, &mut buf), c))
            })
            .collect();
        // stable order: by spread, ties keep input order
        candidates.sort_by(|a, b| cmp_f64(&b.0, &a.0));
        let (mut best_scale, mut best) = match candidates.first() {
            Some((s, c)) => (*s, c.clone()),
            None => {
                // The complement holds no variation; any orthogonal axis will do.
                let axis = (0..n)
                    .find_map(|j| {
                        let mut e = vec![0.0; n];
                        e[j] = 1.0;
                        project_out(&mut e, &basis);
                        normalize(&mut e).then_some(e)
                    })
                    .ok_or(Error::NoVariation)?;
                (0.0, axis)
            }
        };

        let mut planes: Vec<Vec<f64>> = (0..n)
            .map(|j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                e
            })
            .collect();
        planes.extend(candidates.iter().skip(1).take(10).map(|(_, c)| c.clone()));

        let mut half_width = std::f64::consts::FRAC_PI_2;
        for _ in 0..config.refinement_rounds {
            let step = half_width / config.half_grid.max(1) as f64;
            for plane in &planes {
                let mut u = plane.clone();
                project_out(&mut u, &basis);
                project_out(&mut u, std::slice::from_ref(&best));
                if !normalize(&mut u) {
                    continue;
                }
                let mut round_best = (best_scale, best.clone());
                for i in -(config.half_grid as i64)..=(config.half_grid as i64) {
                    if i == 0 {
                        continue;
                    }
                    let theta = i as f64 * step;
                    let (s, c) = theta.sin_cos();
                    let mut cand: Vec<f64> = best.iter().zip(&u).map(|(b, x)| c * b + s * x).collect();
                    normalize(&mut cand);
                    let scale = projected_mad(&data, &cand, &mut buf);
                    if scale > round_best.0 {
                        round_best = (scale, cand);
                    }
                }
                (best_scale, best) = round_best;
            }
            half_width = 2.0 * step;
        }
        // keep exact orthonormality against round-off
        project_out(&mut best, &basis);
        normalize(&mut best);
        best_scale = projected_mad(&data, &best, &mut buf);
        basis.push(best);
        scales.push(best_scale);
    }

    // Order components by decreasing robust spread.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| cmp_f64(&scales[b], &scales[a]));
    let directions: Vec<Vec<f64>> = order.iter().map(|&i| basis[i].clone()).collect();
    let robust_scales: Vec<f64> = order.iter().map(|&i| scales[i]).collect();

    let scores = data
        .iter()
        .map(|row| directions.iter().map(|d| dot(row, d)).collect())
        .collect();
    Ok(EmbeddedPoints {
        scores,
        directions,
        center,
        robust_scales,
    })
}
