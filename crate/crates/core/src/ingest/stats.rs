//! Descriptive statistics and the augmented Dickey-Fuller test.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::StatsError;
use crate::linalg::least_squares;

/// Asymptotic critical values of the constant-only ADF t-statistic
/// (MacKinnon 2010) at the 1%, 5% and 10% levels.
pub const ADF_CRITICAL_CONSTANT: [(f64, f64); 3] = [(0.01, -3.43035), (0.05, -2.86154), (0.10, -2.56677)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub mean: f64,
    pub median: f64,
    pub max: f64,
    pub min: f64,
    /// Sample standard deviation (divisor n - 1).
    pub std: f64,
    pub skewness: f64,
    /// Raw (Pearson) kurtosis; a normal sample is near 3.
    pub kurtosis: f64,
    pub adf_statistic: f64,
    pub adf_significant_1pct: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdfResult {
    /// t-ratio of the lagged level coefficient.
    pub statistic: f64,
    pub lag: usize,
    pub observations: usize,
    pub critical_values: Vec<(f64, f64)>,
}

impl AdfResult {
    /// Whether the unit-root null is rejected at `level` (one of the
    /// embedded levels).
    pub fn rejects_at(&self, level: f64) -> Option<bool> {
        self.critical_values
            .iter()
            .find(|(l, _)| (l - level).abs() < 1e-12)
            .map(|(_, cv)| self.statistic < *cv)
    }
}

/// Table-style summary of one volatility series.
pub fn describe(series: &[f64], adf_lag: usize) -> Result<DescriptiveStats, StatsError> {
    let n = series.len();
    if n < adf_lag + 10 {
        return Err(StatsError::TooShort {
            len: n,
            required: adf_lag + 10,
        });
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut sorted = series.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (min, max) = (sorted[0], sorted[n - 1]);
    if min == max {
        return Err(StatsError::Degenerate);
    }
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let nf = n as f64;
    let mean = series.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in series {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let std = (m2 / (nf - 1.0)).sqrt();
    let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);
    if m2 == 0.0 {
        return Err(StatsError::Degenerate);
    }
    let adf = adf_test(series, adf_lag)?;
    Ok(DescriptiveStats {
        mean,
        median,
        max,
        min,
        std,
        skewness: m3 / m2.powf(1.5),
        kurtosis: m4 / (m2 * m2),
        adf_significant_1pct: adf.rejects_at(0.01).unwrap_or(false),
        adf_statistic: adf.statistic,
    })
}

/// ADF regression with a constant and no trend:
/// `dv_t = a + g v_{t-1} + sum_k b_k dv_{t-k} + u_t`, for `t = lag+1 .. n-1`.
pub fn adf_test(series: &[f64], lag: usize) -> Result<AdfResult, StatsError> {
    let n = series.len();
    let k = lag + 2;
    if n < lag + 1 + k + 1 {
        return Err(StatsError::TooShort {
            len: n,
            required: lag + k + 2,
        });
    }
    let diff: Vec<f64> = series.windows(2).map(|w| w[1] - w[0]).collect();
    let rows = n - 1 - lag;
    // diff[t-1] = v_t - v_{t-1}
    let x = DMatrix::from_fn(rows, k, |r, c| {
        let t = r + lag + 1;
        match c {
            0 => 1.0,
            1 => series[t - 1],
            _ => diff[t - 1 - (c - 1)],
        }
    });
    let y = DMatrix::from_fn(rows, 1, |r, _| diff[r + lag]);
    let fit = least_squares(x, &y).map_err(|_| StatsError::SingularRegression)?;
    let rss = fit.residuals.norm_squared();
    let s2 = rss / (rows - k) as f64;
    let se = (s2 * fit.xtx_inv_diag[1]).sqrt();
    let statistic = fit.coefficients[(1, 0)] / se;
    if !(se > 0.0) || !statistic.is_finite() || rss <= 1e-24 * y.norm_squared() {
        return Err(StatsError::SingularRegression);
    }
    Ok(AdfResult {
        statistic,
        lag,
        observations: rows,
        critical_values: ADF_CRITICAL_CONSTANT.to_vec(),
    })
}
