//! Independent reference computations shared by the integration suites.
//! Nothing here calls the library's MA recursion or decomposition.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spillnet::var::VarModel;

/// `A_h = J C^h J'` from powers of the companion matrix, h = 0..horizon-1.
pub fn ma_by_companion_powers(lags: &[DMatrix<f64>], horizon: usize) -> Vec<DMatrix<f64>> {
    let n = lags[0].nrows();
    let p = lags.len();
    let mut c = DMatrix::zeros(n * p, n * p);
    for (l, phi) in lags.iter().enumerate() {
        c.view_mut((0, l * n), (n, n)).copy_from(phi);
    }
    for k in 0..n * (p - 1) {
        c[(n + k, k)] = 1.0;
    }
    let mut power = DMatrix::identity(n * p, n * p);
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        out.push(power.view((0, 0), (n, n)).into_owned());
        power = &c * &power;
    }
    out
}

/// Generalized decomposition evaluated term by term with scalar loops.
/// Returns the row-normalized matrix.
pub fn gfevd_direct(lags: &[DMatrix<f64>], sigma: &DMatrix<f64>, horizon: usize) -> DMatrix<f64> {
    let n = sigma.nrows();
    let a = ma_by_companion_powers(lags, horizon);
    let mut theta = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut mse = 0.0;
        for ah in &a {
            for k in 0..n {
                for l in 0..n {
                    mse += ah[(i, k)] * sigma[(k, l)] * ah[(i, l)];
                }
            }
        }
        for j in 0..n {
            let mut num = 0.0;
            for ah in &a {
                let mut term = 0.0;
                for k in 0..n {
                    term += ah[(i, k)] * sigma[(k, j)];
                }
                num += term * term;
            }
            theta[(i, j)] = num / sigma[(j, j)] / mse;
        }
    }
    for i in 0..n {
        let s: f64 = theta.row(i).sum();
        for j in 0..n {
            theta[(i, j)] /= s;
        }
    }
    theta
}

/// Monte Carlo estimate of the normalized generalized decomposition.
///
/// Each draw runs the VAR `horizon` steps from a zero state, so the final
/// value is the forecast error. The contribution of series `j` is the sum
/// over steps of the squared covariance between the error and that step's
/// `j` shock, divided by the shock variance.
pub fn gfevd_monte_carlo(model: &VarModel, horizon: usize, draws: usize, seed: u64) -> DMatrix<f64> {
    let n = model.n_series();
    let p = model.lag_order();
    let chol = model.residual_covariance.clone().cholesky().expect("positive definite").l();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut err_sq = DVector::<f64>::zeros(n);
    let mut err_sum = DVector::<f64>::zeros(n);
    // cross[s][(i, j)] accumulates xi_i * u_{s,j}
    let mut cross = vec![DMatrix::<f64>::zeros(n, n); horizon];
    let mut shock_sum = vec![DVector::<f64>::zeros(n); horizon];
    let mut shock_sq = vec![DVector::<f64>::zeros(n); horizon];
    let mut history: Vec<DVector<f64>> = vec![DVector::zeros(n); p];
    let mut shocks: Vec<DVector<f64>> = vec![DVector::zeros(n); horizon];
    for _ in 0..draws {
        history.iter_mut().for_each(|h| h.fill(0.0));
        for s in 0..horizon {
            let z = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let u = &chol * z;
            let mut y = u.clone();
            for (l, phi) in model.coefficients.iter().enumerate() {
                y += phi * &history[l];
            }
            history.rotate_right(1);
            history[0] = y;
            shocks[s] = u;
        }
        let xi = &history[0];
        err_sum += xi;
        err_sq += xi.component_mul(xi);
        for s in 0..horizon {
            cross[s] += xi * shocks[s].transpose();
            shock_sum[s] += &shocks[s];
            shock_sq[s] += shocks[s].component_mul(&shocks[s]);
        }
    }
    let m = draws as f64;
    let mean_xi = &err_sum / m;
    let mut theta = DMatrix::zeros(n, n);
    for i in 0..n {
        let mse = err_sq[i] / m - mean_xi[i] * mean_xi[i];
        for j in 0..n {
            let mut num = 0.0;
            for s in 0..horizon {
                let mean_u = shock_sum[s][j] / m;
                let cov = cross[s][(i, j)] / m - mean_xi[i] * mean_u;
                let var_u = shock_sq[s][j] / m - mean_u * mean_u;
                num += cov * cov / var_u;
            }
            theta[(i, j)] = num / mse;
        }
    }
    for i in 0..n {
        let s: f64 = theta.row(i).sum();
        for j in 0..n {
            theta[(i, j)] /= s;
        }
    }
    theta
}

/// PageRank as the solution of `(I - d G) x = (1 - d) / N`, where column
/// `j` of `G` holds node `j`'s weight-proportional transition probabilities
/// (uniform for nodes without outgoing weight).
pub fn pagerank_linear_solve(n: usize, edges: &[(usize, usize, f64)], damping: f64) -> DVector<f64> {
    let mut g = DMatrix::zeros(n, n);
    let mut out = vec![0.0; n];
    for &(s, _, w) in edges {
        out[s] += w;
    }
    for &(s, t, w) in edges {
        g[(t, s)] += w / out[s];
    }
    for j in 0..n {
        if out[j] == 0.0 {
            for i in 0..n {
                g[(i, j)] = 1.0 / n as f64;
            }
        }
    }
    let lhs = DMatrix::identity(n, n) - g * damping;
    let rhs = DVector::from_element(n, (1.0 - damping) / n as f64);
    lhs.lu().solve(&rhs).expect("nonsingular PageRank system")
}

pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}
