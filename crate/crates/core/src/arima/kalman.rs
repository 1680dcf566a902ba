//! Exact Gaussian likelihood of a zero-mean ARMA process via the Kalman
//! filter on its state-space form.
//!
//! With `r = max(p, q + 1)` the state evolves as `a' = T a + R e`, where `T`
//! has the AR coefficients in its first column and ones on the
//! superdiagonal, and `R = (1, theta_1, .., theta_{r-1})`. The observation is
//! the first state component. The filter is run with unit innovation
//! variance so that the variance can be concentrated out of the likelihood.

use nalgebra::{DMatrix, DVector};

/// One-step prediction errors `v_t` and their relative variances `F_t`.
pub(crate) struct Innovations {
    pub errors: Vec<f64>,
    pub variances: Vec<f64>,
}

/// Stationary state covariance: solves `P = T P T' + R R'`.
fn initial_covariance(transition: &DMatrix<f64>, r_vec: &DVector<f64>) -> Option<DMatrix<f64>> {
    let r = transition.nrows();
    let kron = transition.kronecker(transition);
    let system = DMatrix::<f64>::identity(r * r, r * r) - kron;
    let rrt = r_vec * r_vec.transpose();
    // column-major vec of R R'
    let rhs = DVector::from_column_slice(rrt.as_slice());
    let solution = system.lu().solve(&rhs)?;
    let p = DMatrix::from_column_slice(r, r, solution.as_slice());
    // symmetrize against round-off
    Some((&p + p.transpose()) * 0.5)
}

/// Runs the filter on the centred series `y`.
///
/// Returns `None` if the stationary covariance cannot be formed or a
/// prediction variance becomes non-positive.
pub(crate) fn innovations(y: &[f64], phi: &[f64], theta: &[f64]) -> Option<Innovations> {
    let p = phi.len();
    let q = theta.len();
    let r = p.max(q + 1);
    let mut transition = DMatrix::<f64>::zeros(r, r);
    for (i, &c) in phi.iter().enumerate() {
        transition[(i, 0)] = c;
    }
    for i in 0..r - 1 {
        transition[(i, i + 1)] = 1.0;
    }
    let mut r_vec = DVector::<f64>::zeros(r);
    r_vec[0] = 1.0;
    for (i, &c) in theta.iter().enumerate() {
        r_vec[i + 1] = c;
    }
    let p0 = initial_covariance(&transition, &r_vec)?;

    // Plain row-major buffers: r is at most 6, so nalgebra's allocation
    // overhead would dominate inside the loop.
    let t_row = |i: usize, k: usize| transition[(i, k)];
    let mut tm = vec![0.0; r * r];
    for i in 0..r {
        for k in 0..r {
            tm[i * r + k] = t_row(i, k);
        }
    }
    let rr: Vec<f64> = (0..r * r).map(|ix| r_vec[ix / r] * r_vec[ix % r]).collect();
    let mut pm: Vec<f64> = (0..r * r).map(|ix| p0[(ix / r, ix % r)]).collect();
    let mut a = vec![0.0; r];
    let mut a_next = vec![0.0; r];
    let mut gain = vec![0.0; r];
    let mut tp = vec![0.0; r * r];
    let mut p_next = vec![0.0; r * r];
    let mut steady = false;

    let mut errors = Vec::with_capacity(y.len());
    let mut variances = Vec::with_capacity(y.len());
    for &obs in y {
        let v = obs - a[0];
        let f = pm[0];
        if !(f > 0.0) || !f.is_finite() {
            return None;
        }
        errors.push(v);
        variances.push(f);

        if !steady {
            // T P
            for i in 0..r {
                for j in 0..r {
                    let mut s = 0.0;
                    for k in 0..r {
                        s += tm[i * r + k] * pm[k * r + j];
                    }
                    tp[i * r + j] = s;
                }
            }
            for i in 0..r {
                gain[i] = tp[i * r] / f;
            }
            // T P T' + R R' - K K' F
            let mut change: f64 = 0.0;
            for i in 0..r {
                for j in 0..r {
                    let mut s = 0.0;
                    for k in 0..r {
                        s += tp[i * r + k] * tm[j * r + k];
                    }
                    let val = s + rr[i * r + j] - gain[i] * gain[j] * f;
                    change = change.max((val - pm[i * r + j]).abs());
                    p_next[i * r + j] = val;
                }
            }
            std::mem::swap(&mut pm, &mut p_next);
            steady = change < 1e-13;
        }

        for i in 0..r {
            let mut s = 0.0;
            for k in 0..r {
                s += tm[i * r + k] * a[k];
            }
            a_next[i] = s + gain[i] * v;
        }
        std::mem::swap(&mut a, &mut a_next);
    }
    Some(Innovations { errors, variances })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn white_noise_innovations_are_the_data() {
        let y = [1.0, -2.0, 0.5];
        let inn = innovations(&y, &[], &[]).unwrap();
        assert_eq!(inn.errors, y.to_vec());
        assert_eq!(inn.variances, vec![1.0; 3]);
    }

    #[test]
    fn ar1_prediction_after_first_step() {
        let phi = 0.6;
        let y = [1.0, 2.0, 0.0];
        let inn = innovations(&y, &[phi], &[]).unwrap();
        assert!((inn.variances[0] - 1.0 / (1.0 - phi * phi)).abs() < 1e-12);
        assert!((inn.errors[1] - (2.0 - phi)).abs() < 1e-12);
        assert!((inn.variances[1] - 1.0).abs() < 1e-12);
        assert!((inn.errors[2] - (0.0 - phi * 2.0)).abs() < 1e-12);
    }

    #[test]
    fn ma1_first_variance_is_marginal() {
        let theta = 0.5;
        let inn = innovations(&[0.3, 0.1], &[], &[theta]).unwrap();
        assert!((inn.variances[0] - (1.0 + theta * theta)).abs() < 1e-12);
        // F_2 = 1 + theta^2 - theta^2 / (1 + theta^2)
        let f2 = 1.0 + theta * theta - theta * theta / (1.0 + theta * theta);
        assert!((inn.variances[1] - f2).abs() < 1e-12);
    }
}
