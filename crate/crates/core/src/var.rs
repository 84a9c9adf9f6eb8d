//! VAR(p) estimation and the moving-average expansion.
//!
//! Each equation regresses `y_{i,t}` on `p` lags of every series (plus an
//! optional intercept). All equations share one design matrix, so a single
//! Householder QR solves them together. The residual covariance uses the
//! effective sample `T - p` as divisor.

use nalgebra::{DMatrix, DMatrixView, DVector};
use serde::{Deserialize, Serialize};

use crate::error::VarError;
use crate::ingest::volatility::VolatilityPanel;
use crate::linalg::least_squares;

pub const MAX_LAG: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarSpec {
    pub lag_order: usize,
    pub include_intercept: bool,
}

impl VarSpec {
    pub fn new(lag_order: usize) -> Self {
        Self {
            lag_order,
            include_intercept: true,
        }
    }

    pub fn without_intercept(mut self) -> Self {
        self.include_intercept = false;
        self
    }

    pub fn validate(&self) -> Result<(), VarError> {
        if self.lag_order == 0 || self.lag_order > MAX_LAG {
            return Err(VarError::InvalidLag(self.lag_order));
        }
        Ok(())
    }

    /// Smallest number of observations accepted for `n_series` series.
    pub fn min_observations(&self, n_series: usize) -> usize {
        n_series * self.lag_order + self.lag_order + 10
    }

    /// Regressors per equation.
    pub fn n_regressors(&self, n_series: usize) -> usize {
        n_series * self.lag_order + usize::from(self.include_intercept)
    }
}

impl Default for VarSpec {
    fn default() -> Self {
        Self::new(2)
    }
}

/// A fitted VAR. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct VarModel {
    pub series_ids: Vec<String>,
    pub spec: VarSpec,
    /// `coefficients[l]` is the N x N matrix on lag `l + 1`; entry (i, j) is
    /// the effect of `y_j` on `y_i`.
    pub coefficients: Vec<DMatrix<f64>>,
    /// Zero when the spec has no intercept.
    pub intercept: DVector<f64>,
    pub residual_covariance: DMatrix<f64>,
    pub effective_sample: usize,
    /// OLS standard errors laid out like `coefficients`.
    pub coefficient_std_errors: Vec<DMatrix<f64>>,
    pub max_companion_modulus: f64,
    pub stable: bool,
}

impl VarModel {
    /// Assembles a model from known parameters (no estimation). Useful for
    /// simulation and for checking the decomposition on fixed inputs.
    pub fn from_parts(
        series_ids: Vec<String>,
        coefficients: Vec<DMatrix<f64>>,
        intercept: Option<DVector<f64>>,
        residual_covariance: DMatrix<f64>,
    ) -> Self {
        let n = residual_covariance.nrows();
        assert_eq!(series_ids.len(), n, "one id per series");
        assert!(!coefficients.is_empty(), "at least one lag");
        assert!(coefficients.iter().all(|c| c.shape() == (n, n)), "square N x N lag matrices");
        let max_companion_modulus = spectral_radius(&companion_matrix(&coefficients));
        let spec = VarSpec {
            lag_order: coefficients.len(),
            include_intercept: intercept.is_some(),
        };
        Self {
            series_ids,
            spec,
            coefficient_std_errors: vec![DMatrix::zeros(n, n); coefficients.len()],
            coefficients,
            intercept: intercept.unwrap_or_else(|| DVector::zeros(n)),
            residual_covariance,
            effective_sample: 0,
            stable: max_companion_modulus < 1.0,
            max_companion_modulus,
        }
    }

    pub fn n_series(&self) -> usize {
        self.residual_covariance.nrows()
    }

    pub fn lag_order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn companion(&self) -> DMatrix<f64> {
        companion_matrix(&self.coefficients)
    }

    /// Copy with the residual covariance replaced.
    pub fn with_covariance(&self, sigma: DMatrix<f64>) -> Self {
        Self {
            residual_covariance: sigma,
            ..self.clone()
        }
    }

    /// Reorders series so that new series `k` is old series `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let n = self.n_series();
        let perm = |m: &DMatrix<f64>| DMatrix::from_fn(n, n, |r, c| m[(order[r], order[c])]);
        Self {
            series_ids: order.iter().map(|&i| self.series_ids[i].clone()).collect(),
            coefficients: self.coefficients.iter().map(perm).collect(),
            coefficient_std_errors: self.coefficient_std_errors.iter().map(perm).collect(),
            intercept: DVector::from_fn(n, |r, _| self.intercept[order[r]]),
            residual_covariance: perm(&self.residual_covariance),
            ..self.clone()
        }
    }
}

/// Moving-average matrices `A_0 .. A_{H-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaCoefficients {
    pub matrices: Vec<DMatrix<f64>>,
}

impl MaCoefficients {
    pub fn horizon(&self) -> usize {
        self.matrices.len()
    }
}

/// Fits a VAR on every observation of `panel`.
pub fn fit_var(panel: &VolatilityPanel, spec: VarSpec) -> Result<VarModel, VarError> {
    fit_var_view(&panel.series_ids(), panel.values().as_view(), spec)
}

/// Fits a VAR on an N x T view of observations (columns are dates).
pub fn fit_var_view(series_ids: &[String], values: DMatrixView<'_, f64>, spec: VarSpec) -> Result<VarModel, VarError> {
    spec.validate()?;
    let (n, t) = values.shape();
    let p = spec.lag_order;
    let required = spec.min_observations(n);
    if t < required {
        return Err(VarError::TooShort {
            observations: t,
            series: n,
            lag: p,
            required,
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(VarError::NonFinite);
    }
    let offset = usize::from(spec.include_intercept);
    let k = spec.n_regressors(n);
    let rows = t - p;
    let design = DMatrix::from_fn(rows, k, |r, c| {
        if c < offset {
            1.0
        } else {
            let lag = (c - offset) / n + 1;
            let j = (c - offset) % n;
            values[(j, r + p - lag)]
        }
    });
    let target = DMatrix::from_fn(rows, n, |r, i| values[(i, r + p)]);
    let fit = least_squares(design, &target).map_err(|col| VarError::SingularDesign {
        regressor: if col < offset {
            "intercept".to_string()
        } else {
            format!("lag {} of '{}'", (col - offset) / n + 1, series_ids[(col - offset) % n])
        },
        equation: series_ids[0].clone(),
    })?;

    let b = &fit.coefficients;
    let coefficients: Vec<DMatrix<f64>> = (0..p)
        .map(|l| DMatrix::from_fn(n, n, |i, j| b[(offset + l * n + j, i)]))
        .collect();
    let intercept = if spec.include_intercept {
        DVector::from_fn(n, |i, _| b[(0, i)])
    } else {
        DVector::zeros(n)
    };
    let residuals = &fit.residuals;
    let gram = residuals.transpose() * residuals;
    let mut sigma = gram / rows as f64;
    sigma = (&sigma + sigma.transpose()) * 0.5;

    let dof = (rows - k) as f64;
    let s2: Vec<f64> = (0..n).map(|i| residuals.column(i).norm_squared() / dof).collect();
    let coefficient_std_errors = (0..p)
        .map(|l| DMatrix::from_fn(n, n, |i, j| (s2[i] * fit.xtx_inv_diag[offset + l * n + j]).sqrt()))
        .collect();

    let max_companion_modulus = spectral_radius(&companion_matrix(&coefficients));
    Ok(VarModel {
        series_ids: series_ids.to_vec(),
        spec,
        coefficients,
        intercept,
        residual_covariance: sigma,
        effective_sample: rows,
        coefficient_std_errors,
        stable: max_companion_modulus < 1.0,
        max_companion_modulus,
    })
}

/// `A_i = sum_{l=1..p} Phi_l A_{i-l}` with `A_0 = I` and `A_i = 0` for `i < 0`.
pub fn ma_coefficients(model: &VarModel, horizon: usize) -> MaCoefficients {
    ma_from_lags(&model.coefficients, horizon)
}

pub(crate) fn ma_from_lags(lags: &[DMatrix<f64>], horizon: usize) -> MaCoefficients {
    let n = lags.first().map_or(0, |m| m.nrows());
    let mut matrices: Vec<DMatrix<f64>> = Vec::with_capacity(horizon);
    for i in 0..horizon {
        if i == 0 {
            matrices.push(DMatrix::identity(n, n));
            continue;
        }
        let mut a = DMatrix::zeros(n, n);
        for (l, phi) in lags.iter().enumerate().take(i) {
            a.gemm(1.0, phi, &matrices[i - 1 - l], 1.0);
        }
        matrices.push(a);
    }
    MaCoefficients { matrices }
}

/// Np x Np companion matrix: lag blocks across the top, identity below.
pub fn companion_matrix(lags: &[DMatrix<f64>]) -> DMatrix<f64> {
    let n = lags.first().map_or(0, |m| m.nrows());
    let np = n * lags.len();
    let mut c = DMatrix::zeros(np, np);
    for (l, phi) in lags.iter().enumerate() {
        c.view_mut((0, l * n), (n, n)).copy_from(phi);
    }
    for r in n..np {
        c[(r, r - n)] = 1.0;
    }
    c
}

/// Largest eigenvalue modulus. NaN for non-finite input.
///
/// Falls back to Gelfand's formula if the QR iteration does not converge.
pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    if m.iter().any(|v| !v.is_finite()) {
        return f64::NAN;
    }
    match crate::eigen::eigenvalues(m) {
        Some(values) => values.iter().map(|(re, im)| re.hypot(*im)).fold(0.0, f64::max),
        None => gelfand_radius(m),
    }
}

fn gelfand_radius(m: &DMatrix<f64>) -> f64 {
    // rho = lim ||M^k||^(1/k), with k = 2^j and the scale tracked in logs
    let mut power = m.clone();
    let mut log_scale = 0.0;
    let mut k = 1.0;
    for _ in 0..40 {
        let norm = power.norm();
        if norm == 0.0 {
            return 0.0;
        }
        power /= norm;
        log_scale += norm.ln();
        power = &power * &power;
        log_scale *= 2.0;
        k *= 2.0;
    }
    let norm = power.norm();
    if norm == 0.0 {
        0.0
    } else {
        ((log_scale + norm.ln()) / k).exp()
    }
}
