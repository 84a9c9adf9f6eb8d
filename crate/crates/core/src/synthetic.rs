//! Seeded synthetic data: VAR simulations, random stable models and OHLC
//! panels. Used by the examples, the test suites and benchmark runs where
//! real sector data is not available.

use chrono::NaiveDate;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ingest::volatility::VolatilityPanel;
use crate::ingest::{OhlcBar, OhlcPanel, SeriesInfo};
use crate::var::{companion_matrix, spectral_radius, VarModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal_vector(rng: &mut impl Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

/// Lower Cholesky factor, panicking on a non-positive-definite input.
fn cholesky(sigma: &DMatrix<f64>) -> DMatrix<f64> {
    sigma
        .clone()
        .cholesky()
        .expect("covariance must be positive definite")
        .l()
}

/// Simulates `t` observations (returned as an N x t matrix) from `model`
/// with Gaussian shocks, discarding `burn_in` leading draws.
pub fn simulate_var(model: &VarModel, t: usize, burn_in: usize, seed: u64) -> DMatrix<f64> {
    let n = model.n_series();
    let p = model.lag_order();
    let chol = cholesky(&model.residual_covariance);
    let mut rng = rng(seed);
    let total = t + burn_in + p;
    let mut y = DMatrix::zeros(n, total);
    for s in p..total {
        let mut next = model.intercept.clone() + &chol * normal_vector(&mut rng, n);
        for (l, phi) in model.coefficients.iter().enumerate() {
            next.gemv(1.0, phi, &y.column(s - 1 - l), 1.0);
        }
        y.set_column(s, &next);
    }
    y.columns(burn_in + p, t).into_owned()
}

/// Random VAR with companion spectral radius scaled to `target_radius`,
/// and a random well-conditioned residual covariance.
pub fn random_stable_model(n: usize, p: usize, target_radius: f64, seed: u64) -> VarModel {
    let mut rng = rng(seed);
    let mut lags: Vec<DMatrix<f64>> = (0..p)
        .map(|l| DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0) / (l + 1) as f64))
        .collect();
    let rho = spectral_radius(&companion_matrix(&lags));
    if rho > 0.0 {
        // scaling lag l by c^l scales every companion eigenvalue by c
        let c = target_radius / rho;
        for (l, m) in lags.iter_mut().enumerate() {
            *m *= c.powi(l as i32 + 1);
        }
    }
    let factor = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let sigma = &factor * factor.transpose() + DMatrix::identity(n, n) * 0.5;
    let ids = (1..=n).map(|i| format!("S{i}")).collect();
    VarModel::from_parts(ids, lags, None, sigma)
}

fn sector_ids(n: usize) -> Vec<SeriesInfo> {
    (1..=n)
        .map(|i| SeriesInfo {
            id: format!("X{i:02}"),
            name: Some(format!("Synthetic sector {i}")),
            code: Some(format!("{}", 900000 + 10 * i)),
        })
        .collect()
}

fn business_days(start: NaiveDate, count: usize) -> Vec<NaiveDate> {
    use chrono::Datelike;
    start
        .iter_days()
        .filter(|d| d.weekday().number_from_monday() <= 5)
        .take(count)
        .collect()
}

/// Volatility-like panel from a stable VAR(2) with a common factor in the
/// shocks and sector blocks in the dynamics. Values are in daily-variance
/// units (around 3e-4).
pub fn sector_volatility_panel(n: usize, days: usize, seed: u64) -> VolatilityPanel {
    let model = sector_model(n, seed);
    let scale = 1e-4;
    let data = simulate_var(&model, days, 300, seed.wrapping_add(1)) * scale;
    let start = NaiveDate::from_ymd_opt(2000, 1, 4).unwrap();
    VolatilityPanel::new(sector_ids(n), business_days(start, days), data).expect("finite simulated panel")
}

fn sector_model(n: usize, seed: u64) -> VarModel {
    let mut rng = rng(seed);
    let blocks = 4usize.min(n).max(1);
    let block_of = |i: usize| i * blocks / n;
    let phi1 = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.35
        } else if block_of(i) == block_of(j) {
            0.12 / n as f64 * blocks as f64
        } else {
            0.02 / n as f64 * blocks as f64
        }
    });
    let phi2 = DMatrix::from_fn(n, n, |i, j| if i == j { 0.15 } else { 0.0 });
    let loadings = DVector::from_fn(n, |_, _| rng.gen_range(0.6..1.2));
    let block_load = DVector::from_fn(n, |_, _| rng.gen_range(0.3..0.7));
    let sigma = DMatrix::from_fn(n, n, |i, j| {
        let common = loadings[i] * loadings[j];
        let block = if block_of(i) == block_of(j) {
            block_load[i] * block_load[j]
        } else {
            0.0
        };
        common + block + if i == j { 0.8 } else { 0.0 }
    });
    let intercept = DVector::from_element(n, 1.5);
    let ids = sector_ids(n).into_iter().map(|s| s.id).collect();
    VarModel::from_parts(ids, vec![phi1, phi2], Some(intercept), sigma)
}

/// Panel whose shock correlation jumps at the midpoint: a calm regime with
/// mostly idiosyncratic shocks followed by a regime dominated by a common
/// factor.
pub fn two_regime_panel(n: usize, days: usize, seed: u64) -> VolatilityPanel {
    let half = days / 2;
    let phi = DMatrix::from_fn(n, n, |i, j| if i == j { 0.4 } else { 0.0 });
    let ids: Vec<String> = sector_ids(n).into_iter().map(|s| s.id).collect();
    let calm_sigma = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.05 });
    let stress_sigma = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.85 });
    let intercept = Some(DVector::from_element(n, 2.0));
    let calm = VarModel::from_parts(ids.clone(), vec![phi.clone()], intercept.clone(), calm_sigma);
    let stress = VarModel::from_parts(ids, vec![phi], intercept, stress_sigma);
    let a = simulate_var(&calm, half, 200, seed);
    let b = simulate_var(&stress, days - half, 200, seed.wrapping_add(7));
    let mut data = DMatrix::zeros(n, days);
    data.columns_mut(0, half).copy_from(&a);
    data.columns_mut(half, days - half).copy_from(&b);
    let start = NaiveDate::from_ymd_opt(2005, 1, 3).unwrap();
    VolatilityPanel::new(sector_ids(n), business_days(start, days), data * 1e-4).expect("finite simulated panel")
}

/// Daily OHLC log-price bars whose intraday ranges follow a persistent,
/// cross-correlated volatility process.
pub fn ohlc_panel(n: usize, days: usize, seed: u64) -> OhlcPanel {
    let mut rng = rng(seed);
    let start = NaiveDate::from_ymd_opt(2000, 1, 4).unwrap();
    let calendar = business_days(start, days);
    let mut log_vol = vec![0.0f64; n];
    let mut level: Vec<f64> = (0..n).map(|i| (1000.0 + 50.0 * i as f64).ln()).collect();
    let mut bars = vec![Vec::with_capacity(days); n];
    for date in &calendar {
        let common: f64 = rng.sample(StandardNormal);
        for i in 0..n {
            let idio: f64 = rng.sample(StandardNormal);
            log_vol[i] = 0.95 * log_vol[i] + 0.2 * common + 0.15 * idio;
            let sigma = 0.015 * log_vol[i].exp();
            let open = level[i] + sigma * 0.2 * rng.sample::<f64, _>(StandardNormal);
            let close = open + sigma * rng.sample::<f64, _>(StandardNormal);
            let up: f64 = rng.sample::<f64, _>(StandardNormal).abs();
            let down: f64 = rng.sample::<f64, _>(StandardNormal).abs();
            let high = open.max(close) + 0.5 * sigma * up;
            let low = open.min(close) - 0.5 * sigma * down;
            bars[i].push(OhlcBar::new(*date, open, high, low, close).expect("ordered synthetic bar"));
            level[i] = close;
        }
    }
    OhlcPanel::new(sector_ids(n), calendar, bars, []).expect("rectangular synthetic panel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_models_hit_target_radius() {
        for seed in 0..10 {
            let m = random_stable_model(3, 2, 0.8, seed);
            assert!((m.max_companion_modulus - 0.8).abs() < 1e-8, "{}", m.max_companion_modulus);
            assert!(m.stable);
        }
    }

    #[test]
    fn simulation_is_seeded() {
        let m = random_stable_model(2, 1, 0.5, 4);
        assert_eq!(simulate_var(&m, 50, 10, 1), simulate_var(&m, 50, 10, 1));
        assert_ne!(simulate_var(&m, 50, 10, 1), simulate_var(&m, 50, 10, 2));
    }

    #[test]
    fn synthetic_panels_have_expected_shape() {
        let v = sector_volatility_panel(5, 300, 1);
        assert_eq!((v.n_series(), v.n_obs()), (5, 300));
        let o = ohlc_panel(3, 40, 2);
        assert_eq!((o.n_series(), o.n_dates()), (3, 40));
    }
}
