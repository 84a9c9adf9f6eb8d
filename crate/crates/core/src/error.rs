use std::path::PathBuf;

use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised while loading and validating OHLC input.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: line {line}: {message}")]
    Parse {
        file: String,
        line: u64,
        message: String,
    },
    #[error("invalid bar for series '{series}' on {date}: {reason}")]
    Validation {
        series: String,
        date: NaiveDate,
        reason: String,
    },
    #[error("alignment dropped {dropped} of {total} dates ({fraction:.4}), above the allowed fraction {allowed}")]
    Alignment {
        dropped: usize,
        total: usize,
        fraction: f64,
        allowed: f64,
    },
    #[error("panel too small: {series} series and {dates} aligned dates (need at least {min_series} and {min_dates})")]
    TooSmall {
        series: usize,
        dates: usize,
        min_series: usize,
        min_dates: usize,
    },
    #[error("{0}")]
    Schema(String),
}

/// Errors from descriptive statistics and unit-root tests.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("series has {len} observations, need at least {required}")]
    TooShort { len: usize, required: usize },
    #[error("series has zero variance; skewness and kurtosis are undefined")]
    Degenerate,
    #[error("ADF regression is singular (collinear regressors or a perfect fit)")]
    SingularRegression,
    #[error("series contains non-finite values")]
    NonFinite,
}

/// Errors from VAR estimation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum VarError {
    #[error("lag order {0} outside the supported range 1..=20")]
    InvalidLag(usize),
    #[error("{observations} observations for {series} series at lag {lag}; need at least {required}")]
    TooShort {
        observations: usize,
        series: usize,
        lag: usize,
        required: usize,
    },
    #[error("singular design: regressor {regressor} is collinear with earlier columns (affects every equation, first: '{equation}')")]
    SingularDesign { regressor: String, equation: String },
    #[error("panel contains non-finite values")]
    NonFinite,
}

/// Errors from the generalized variance decomposition.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FevdError {
    #[error("horizon must be at least 1")]
    InvalidHorizon,
    #[error("residual variance of '{series}' is not positive ({value})")]
    DegenerateCovariance { series: String, value: f64 },
    #[error("forecast-error variance of '{series}' is zero at the requested horizon")]
    DegenerateVariance { series: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Errors from network construction and centrality.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("series ids of the net-pairwise matrix and the connectedness table differ")]
    IdMismatch,
    #[error("damping must lie in (0, 1), got {0}")]
    InvalidDamping(f64),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("PageRank did not converge in {iterations} iterations (last L1 change {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
}

/// Errors from windowed analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RollingError {
    #[error("window size {window} is below the minimum {required} for {series} series at lag {lag}")]
    WindowTooSmall {
        window: usize,
        required: usize,
        series: usize,
        lag: usize,
    },
    #[error("panel has {observations} observations, fewer than the window size {window}")]
    PanelTooShort { observations: usize, window: usize },
    #[error("step must be at least 1")]
    InvalidStep,
    #[error("horizon must be at least 1")]
    InvalidHorizon,
    #[error("empty parameter grid")]
    EmptyGrid,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Var(#[from] VarError),
    #[error(transparent)]
    Fevd(#[from] FevdError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Rolling(#[from] RollingError),
    #[error("config: {0}")]
    Config(String),
    #[error("date slice {start}..={end} selects no observations")]
    EmptySlice { start: NaiveDate, end: NaiveDate },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("output: {0}")]
    Output(String),
}
