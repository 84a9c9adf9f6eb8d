//! Generalized forecast-error variance decomposition.
//!
//! For horizon `H`, the share of series `i`'s forecast-error variance due to
//! shocks in series `j` is
//!
//! ```text
//! d_ij = sigma_jj^{-1} * sum_h (e_i' A_h S e_j)^2 / sum_h (e_i' A_h S A_h' e_i)
//! ```
//!
//! summed over `h = 0 .. H-1`, where `S` is the residual covariance and
//! `A_h` the moving-average matrices. Rows of `d` do not sum to one, so each
//! row is divided by its sum to give the normalized matrix. Rows are
//! receivers and columns are sources.

use nalgebra::DMatrix;

use crate::error::FevdError;
use crate::var::{ma_coefficients, MaCoefficients, VarModel};

#[derive(Debug, Clone, PartialEq)]
pub struct FevdMatrix {
    pub horizon: usize,
    pub series_ids: Vec<String>,
    /// Unnormalized shares.
    pub raw: DMatrix<f64>,
    /// Row-normalized shares; every row sums to one.
    pub normalized: DMatrix<f64>,
}

impl FevdMatrix {
    /// Wraps a matrix of nonnegative shares, row-normalizing it. Used for
    /// published tables and other precomputed decompositions.
    pub fn from_shares(series_ids: Vec<String>, horizon: usize, shares: DMatrix<f64>) -> Result<Self, FevdError> {
        let n = series_ids.len();
        if shares.shape() != (n, n) {
            return Err(FevdError::Shape(format!(
                "{} ids for a {}x{} matrix",
                n,
                shares.nrows(),
                shares.ncols()
            )));
        }
        if shares.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(FevdError::Shape("shares must be finite and nonnegative".into()));
        }
        let normalized = normalize_rows(&shares, &series_ids)?;
        Ok(Self {
            horizon,
            series_ids,
            raw: shares,
            normalized,
        })
    }

    pub fn n_series(&self) -> usize {
        self.series_ids.len()
    }

    /// Reorders series so that new series `k` is old series `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let n = self.n_series();
        let perm = |m: &DMatrix<f64>| DMatrix::from_fn(n, n, |r, c| m[(order[r], order[c])]);
        Self {
            horizon: self.horizon,
            series_ids: order.iter().map(|&i| self.series_ids[i].clone()).collect(),
            raw: perm(&self.raw),
            normalized: perm(&self.normalized),
        }
    }
}

/// Numerator and denominator sums of the decomposition, before the
/// `sigma_jj` division. Exposed so callers can inspect how the sums
/// accumulate with the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct FevdSums {
    /// `sum_h (A_h S)_{ij}^2`
    pub numerator: DMatrix<f64>,
    /// `sum_h (A_h S A_h')_{ii}`
    pub denominator: Vec<f64>,
}

pub fn fevd_sums(ma: &MaCoefficients, sigma: &DMatrix<f64>) -> FevdSums {
    let n = sigma.nrows();
    let mut numerator = DMatrix::zeros(n, n);
    let mut denominator = vec![0.0; n];
    let mut a_sigma = DMatrix::zeros(n, n);
    for a in &ma.matrices {
        a_sigma.gemm(1.0, a, sigma, 0.0);
        numerator.zip_apply(&a_sigma, |acc, v| *acc += v * v);
        for (i, den) in denominator.iter_mut().enumerate() {
            // (A S A')_ii = sum_k (A S)_ik A_ik
            *den += a_sigma.row(i).dot(&a.row(i));
        }
    }
    FevdSums { numerator, denominator }
}

/// Generalized decomposition of `model` at horizon `horizon`.
pub fn gfevd(model: &VarModel, horizon: usize) -> Result<FevdMatrix, FevdError> {
    if horizon == 0 {
        return Err(FevdError::InvalidHorizon);
    }
    let ma = ma_coefficients(model, horizon);
    gfevd_with(&model.series_ids, &ma, &model.residual_covariance)
}

/// Decomposition from precomputed moving-average matrices.
pub fn gfevd_with(series_ids: &[String], ma: &MaCoefficients, sigma: &DMatrix<f64>) -> Result<FevdMatrix, FevdError> {
    let n = sigma.nrows();
    if ma.horizon() == 0 {
        return Err(FevdError::InvalidHorizon);
    }
    if series_ids.len() != n || sigma.ncols() != n {
        return Err(FevdError::Shape(format!(
            "{} ids for a {}x{} covariance",
            series_ids.len(),
            n,
            sigma.ncols()
        )));
    }
    for j in 0..n {
        let s = sigma[(j, j)];
        if !(s > 0.0) || !s.is_finite() {
            return Err(FevdError::DegenerateCovariance {
                series: series_ids[j].clone(),
                value: s,
            });
        }
    }
    let sums = fevd_sums(ma, sigma);
    for (i, den) in sums.denominator.iter().enumerate() {
        if !(*den > 0.0) || !den.is_finite() {
            return Err(FevdError::DegenerateVariance {
                series: series_ids[i].clone(),
            });
        }
    }
    let raw = DMatrix::from_fn(n, n, |i, j| sums.numerator[(i, j)] / (sigma[(j, j)] * sums.denominator[i]));
    let normalized = normalize_rows(&raw, series_ids)?;
    Ok(FevdMatrix {
        horizon: ma.horizon(),
        series_ids: series_ids.to_vec(),
        raw,
        normalized,
    })
}

fn normalize_rows(raw: &DMatrix<f64>, ids: &[String]) -> Result<DMatrix<f64>, FevdError> {
    let mut out = raw.clone();
    for (i, mut row) in out.row_iter_mut().enumerate() {
        let total = row.sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(FevdError::DegenerateVariance { series: ids[i].clone() });
        }
        row /= total;
    }
    Ok(out)
}
