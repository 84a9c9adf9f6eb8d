//! Rolling-window connectedness and parameter sweeps.
//!
//! Window `k` covers observations `[k * step, k * step + W)` and is labeled
//! by its last date. Every window is fitted from scratch and windows are
//! independent work items: they run on the current rayon pool in any order
//! and results are written back by window index, so output does not depend
//! on scheduling or thread count.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use nalgebra::{DMatrix, DMatrixView};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connect::connectedness;
use crate::error::{Error, RollingError};
use crate::fevd::gfevd_with;
use crate::ingest::volatility::VolatilityPanel;
use crate::var::{fit_var_view, ma_coefficients, VarSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RollingConfig {
    pub window: usize,
    pub step: usize,
    pub var_spec: VarSpec,
    pub horizon: usize,
}

impl Default for RollingConfig {
    fn default() -> Self {
        Self {
            window: 240,
            step: 1,
            var_spec: VarSpec::new(2),
            horizon: 10,
        }
    }
}

impl RollingConfig {
    pub fn validate(&self, n_series: usize, observations: usize) -> Result<(), RollingError> {
        if self.step == 0 {
            return Err(RollingError::InvalidStep);
        }
        if self.horizon == 0 {
            return Err(RollingError::InvalidHorizon);
        }
        let required = self.var_spec.min_observations(n_series);
        if self.window < required {
            return Err(RollingError::WindowTooSmall {
                window: self.window,
                required,
                series: n_series,
                lag: self.var_spec.lag_order,
            });
        }
        if observations < self.window {
            return Err(RollingError::PanelTooShort {
                observations,
                window: self.window,
            });
        }
        Ok(())
    }

    /// `floor((T - W) / step) + 1`, or zero when the panel is shorter than a window.
    pub fn window_count(&self, observations: usize) -> usize {
        if observations < self.window || self.step == 0 {
            0
        } else {
            (observations - self.window) / self.step + 1
        }
    }
}

/// A window whose pipeline raised an error. It is left as a gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowFailure {
    pub index: usize,
    pub end_date: NaiveDate,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RollingResult {
    pub config: RollingConfig,
    pub series_ids: Vec<String>,
    pub window_end_dates: Vec<NaiveDate>,
    /// `None` for failed windows.
    pub total_pct: Vec<Option<f64>>,
    /// Series x windows; NaN in failed windows.
    pub from_pct: DMatrix<f64>,
    pub to_pct: DMatrix<f64>,
    pub net_pct: DMatrix<f64>,
    pub unstable_flags: Vec<Option<bool>>,
    pub max_companion_modulus: Vec<Option<f64>>,
    pub failures: Vec<WindowFailure>,
}

impl RollingResult {
    pub fn n_windows(&self) -> usize {
        self.window_end_dates.len()
    }

    pub fn is_gap(&self, window: usize) -> bool {
        self.total_pct[window].is_none()
    }

    /// Largest absolute difference of total connectedness against `other`
    /// over the end dates where both have a value. `None` when no date is
    /// shared.
    pub fn max_abs_total_difference(&self, other: &RollingResult) -> Option<f64> {
        let theirs: BTreeMap<NaiveDate, f64> = other
            .window_end_dates
            .iter()
            .zip(&other.total_pct)
            .filter_map(|(d, v)| v.map(|v| (*d, v)))
            .collect();
        self.window_end_dates
            .iter()
            .zip(&self.total_pct)
            .filter_map(|(d, v)| Some((v.as_ref()? - theirs.get(d)?).abs()))
            .reduce(f64::max)
    }
}

#[derive(Debug, Clone)]
struct WindowSummary {
    total: f64,
    from: Vec<f64>,
    to: Vec<f64>,
    net: Vec<f64>,
    unstable: bool,
    modulus: f64,
}

/// Fits one window and decomposes it at every requested horizon.
fn analyze_window(
    ids: &[String],
    view: DMatrixView<'_, f64>,
    spec: VarSpec,
    horizons: &[usize],
) -> Vec<Result<WindowSummary, String>> {
    let model = match fit_var_view(ids, view, spec) {
        Ok(m) => m,
        Err(e) => return vec![Err(e.to_string()); horizons.len()],
    };
    let longest = horizons.iter().copied().max().unwrap_or(0);
    let ma = ma_coefficients(&model, longest);
    horizons
        .iter()
        .map(|&h| {
            let truncated = crate::var::MaCoefficients {
                matrices: ma.matrices[..h].to_vec(),
            };
            let fevd = gfevd_with(ids, &truncated, &model.residual_covariance).map_err(|e| e.to_string())?;
            let table = connectedness(&fevd);
            Ok(WindowSummary {
                total: table.total_pct,
                from: table.from_pct.iter().copied().collect(),
                to: table.to_pct.iter().copied().collect(),
                net: table.net_pct.iter().copied().collect(),
                unstable: !model.stable,
                modulus: model.max_companion_modulus,
            })
        })
        .collect()
}

fn assemble(
    panel: &VolatilityPanel,
    config: RollingConfig,
    outcomes: impl ExactSizeIterator<Item = Result<WindowSummary, String>>,
) -> RollingResult {
    let n = panel.n_series();
    let count = outcomes.len();
    let mut result = RollingResult {
        config,
        series_ids: panel.series_ids(),
        window_end_dates: Vec::with_capacity(count),
        total_pct: Vec::with_capacity(count),
        from_pct: DMatrix::from_element(n, count, f64::NAN),
        to_pct: DMatrix::from_element(n, count, f64::NAN),
        net_pct: DMatrix::from_element(n, count, f64::NAN),
        unstable_flags: Vec::with_capacity(count),
        max_companion_modulus: Vec::with_capacity(count),
        failures: Vec::new(),
    };
    for (k, outcome) in outcomes.enumerate() {
        let end_date = panel.dates()[k * config.step + config.window - 1];
        result.window_end_dates.push(end_date);
        match outcome {
            Ok(s) => {
                result.total_pct.push(Some(s.total));
                for i in 0..n {
                    result.from_pct[(i, k)] = s.from[i];
                    result.to_pct[(i, k)] = s.to[i];
                    result.net_pct[(i, k)] = s.net[i];
                }
                result.unstable_flags.push(Some(s.unstable));
                result.max_companion_modulus.push(Some(s.modulus));
            }
            Err(error) => {
                result.total_pct.push(None);
                result.unstable_flags.push(None);
                result.max_companion_modulus.push(None);
                result.failures.push(WindowFailure {
                    index: k,
                    end_date,
                    error,
                });
            }
        }
    }
    result
}

/// Runs fit, decomposition and aggregation on every window.
pub fn roll(panel: &VolatilityPanel, config: &RollingConfig) -> Result<RollingResult, RollingError> {
    config.validate(panel.n_series(), panel.n_obs())?;
    let ids = panel.series_ids();
    let values = panel.values();
    let count = config.window_count(panel.n_obs());
    let outcomes: Vec<Result<WindowSummary, String>> = (0..count)
        .into_par_iter()
        .map(|k| {
            let view = values.columns(k * config.step, config.window);
            analyze_window(&ids, view, config.var_spec, &[config.horizon])
                .pop()
                .expect("one horizon")
        })
        .collect();
    Ok(assemble(panel, *config, outcomes.into_iter()))
}

/// Runs `f` on a dedicated pool with `threads` workers (0 = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, Error> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepGrid {
    pub windows: Vec<usize>,
    pub horizons: Vec<usize>,
    pub lags: Vec<usize>,
    pub step: usize,
    pub include_intercept: bool,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            windows: vec![220, 240, 260],
            horizons: vec![5, 10, 15],
            lags: vec![1, 2, 3, 4, 5],
            step: 1,
            include_intercept: true,
        }
    }
}

impl SweepGrid {
    pub fn single(config: &RollingConfig) -> Self {
        Self {
            windows: vec![config.window],
            horizons: vec![config.horizon],
            lags: vec![config.var_spec.lag_order],
            step: config.step,
            include_intercept: config.var_spec.include_intercept,
        }
    }

    pub fn combinations(&self) -> usize {
        self.windows.len() * self.horizons.len() * self.lags.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRun {
    pub config: RollingConfig,
    pub outcome: Result<RollingResult, RollingError>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub date: NaiveDate,
    pub min: f64,
    pub median: f64,
    pub max: f64,
    /// Curves with a value on this date.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// In grid order: window, then horizon, then lag.
    pub runs: Vec<SweepRun>,
    pub envelope: Vec<EnvelopePoint>,
}

impl SweepResult {
    pub fn successful(&self) -> impl Iterator<Item = &RollingResult> {
        self.runs.iter().filter_map(|r| r.outcome.as_ref().ok())
    }

    pub fn failed(&self) -> impl Iterator<Item = (&RollingConfig, &RollingError)> {
        self.runs.iter().filter_map(|r| r.outcome.as_ref().err().map(|e| (&r.config, e)))
    }

    /// Widest per-date spread (max - min) of total connectedness over dates
    /// where every successful curve has a value.
    pub fn max_spread(&self) -> Option<f64> {
        let curves = self.successful().count();
        self.envelope
            .iter()
            .filter(|p| p.count == curves)
            .map(|p| p.max - p.min)
            .reduce(f64::max)
    }
}

/// Rolling analysis for every (window, horizon, lag) combination.
///
/// Fits are shared across horizons: each (window, lag) pair fits every
/// window once and decomposes it at all horizons of the grid. Invalid
/// combinations are reported per run and do not stop the others.
pub fn sweep(panel: &VolatilityPanel, grid: &SweepGrid) -> Result<SweepResult, RollingError> {
    if grid.combinations() == 0 {
        return Err(RollingError::EmptyGrid);
    }
    let n = panel.n_series();
    let t = panel.n_obs();
    let config_for = |window: usize, horizon: usize, lag: usize| RollingConfig {
        window,
        step: grid.step,
        var_spec: VarSpec {
            lag_order: lag,
            include_intercept: grid.include_intercept,
        },
        horizon,
    };

    // (window, lag) groups with at least one valid horizon
    struct Group {
        window: usize,
        lag: usize,
        horizons: Vec<usize>,
        windows: usize,
    }
    let mut groups = Vec::new();
    for &w in &grid.windows {
        for &p in &grid.lags {
            let horizons: Vec<usize> = grid
                .horizons
                .iter()
                .copied()
                .filter(|&h| config_for(w, h, p).validate(n, t).is_ok())
                .collect();
            if !horizons.is_empty() {
                let windows = config_for(w, horizons[0], p).window_count(t);
                groups.push(Group {
                    window: w,
                    lag: p,
                    horizons,
                    windows,
                });
            }
        }
    }

    let items: Vec<(usize, usize)> = groups
        .iter()
        .enumerate()
        .flat_map(|(g, group)| (0..group.windows).map(move |k| (g, k)))
        .collect();
    let ids = panel.series_ids();
    let values = panel.values();
    let outcomes: Vec<Vec<Result<WindowSummary, String>>> = items
        .par_iter()
        .map(|&(g, k)| {
            let group = &groups[g];
            let view = values.columns(k * grid.step, group.window);
            let spec = VarSpec {
                lag_order: group.lag,
                include_intercept: grid.include_intercept,
            };
            analyze_window(&ids, view, spec, &group.horizons)
        })
        .collect();

    // per group, per horizon: window outcomes in index order
    let mut by_group: Vec<Vec<Vec<Result<WindowSummary, String>>>> = groups
        .iter()
        .map(|g| vec![Vec::with_capacity(g.windows); g.horizons.len()])
        .collect();
    for ((g, _), per_horizon) in items.iter().zip(outcomes) {
        for (slot, outcome) in by_group[*g].iter_mut().zip(per_horizon) {
            slot.push(outcome);
        }
    }

    let mut runs = Vec::with_capacity(grid.combinations());
    for &w in &grid.windows {
        for &h in &grid.horizons {
            for &p in &grid.lags {
                let config = config_for(w, h, p);
                let outcome = match config.validate(n, t) {
                    Err(e) => Err(e),
                    Ok(()) => {
                        let g = groups
                            .iter()
                            .position(|g| g.window == w && g.lag == p)
                            .expect("valid combination has a group");
                        let hi = groups[g].horizons.iter().position(|&x| x == h).expect("valid horizon");
                        Ok(assemble(panel, config, by_group[g][hi].iter().cloned().collect::<Vec<_>>().into_iter()))
                    }
                };
                runs.push(SweepRun { config, outcome });
            }
        }
    }
    let envelope = envelope(runs.iter().filter_map(|r| r.outcome.as_ref().ok()));
    Ok(SweepResult { runs, envelope })
}

/// Per-date min / median / max of total connectedness across curves.
pub fn envelope<'a>(curves: impl Iterator<Item = &'a RollingResult>) -> Vec<EnvelopePoint> {
    let mut by_date: BTreeMap<NaiveDate, Vec<f64>> = BTreeMap::new();
    for curve in curves {
        for (d, v) in curve.window_end_dates.iter().zip(&curve.total_pct) {
            if let Some(v) = v {
                by_date.entry(*d).or_default().push(*v);
            }
        }
    }
    by_date
        .into_iter()
        .map(|(date, mut values)| {
            values.sort_by(f64::total_cmp);
            let m = values.len();
            let median = if m % 2 == 1 {
                values[m / 2]
            } else {
                0.5 * (values[m / 2 - 1] + values[m / 2])
            };
            EnvelopePoint {
                date,
                min: values[0],
                median,
                max: values[m - 1],
                count: m,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fevd::gfevd;
    use crate::synthetic::sector_volatility_panel;
    use crate::var::fit_var;

    fn small_config(window: usize) -> RollingConfig {
        RollingConfig {
            window,
            step: 1,
            var_spec: VarSpec::new(1),
            horizon: 5,
        }
    }

    #[test]
    fn single_window_equals_static_analysis() {
        let panel = sector_volatility_panel(3, 60, 5);
        let r = roll(&panel, &small_config(60)).unwrap();
        assert_eq!(r.n_windows(), 1);
        let model = fit_var(&panel, VarSpec::new(1)).unwrap();
        let table = connectedness(&gfevd(&model, 5).unwrap());
        assert_eq!(r.total_pct[0], Some(table.total_pct));
        for i in 0..3 {
            assert_eq!(r.net_pct[(i, 0)], table.net_pct[i]);
        }
        assert_eq!(r.window_end_dates, vec![*panel.dates().last().unwrap()]);
    }

    #[test]
    fn end_dates_are_window_last_days() {
        let panel = sector_volatility_panel(3, 62, 5);
        let r = roll(&panel, &small_config(60)).unwrap();
        assert_eq!(r.n_windows(), 3);
        assert_eq!(r.window_end_dates, panel.dates()[59..].to_vec());
    }

    #[test]
    fn window_count_formula() {
        let panel = sector_volatility_panel(2, 100, 1);
        for step in [1, 3, 7, 40] {
            let cfg = RollingConfig {
                step,
                ..small_config(40)
            };
            let r = roll(&panel, &cfg).unwrap();
            assert_eq!(r.n_windows(), (100 - 40) / step + 1);
            assert_eq!(r.from_pct.ncols(), r.n_windows());
        }
    }

    #[test]
    fn invalid_configs() {
        let panel = sector_volatility_panel(3, 50, 1);
        assert!(matches!(roll(&panel, &small_config(10)), Err(RollingError::WindowTooSmall { .. })));
        assert!(matches!(roll(&panel, &small_config(51)), Err(RollingError::PanelTooShort { .. })));
        let zero_step = RollingConfig {
            step: 0,
            ..small_config(30)
        };
        assert_eq!(roll(&panel, &zero_step), Err(RollingError::InvalidStep));
    }

    #[test]
    fn failing_windows_leave_gaps() {
        let mut values = sector_volatility_panel(2, 80, 2).values().clone();
        // a flat stretch makes every window inside it singular
        for t in 20..60 {
            values[(0, t)] = 1e-4;
            values[(1, t)] = 2e-4;
        }
        let panel = VolatilityPanel::from_matrix(values, NaiveDate::from_ymd_opt(2020, 1, 1).unwrap()).unwrap();
        let r = roll(&panel, &small_config(30)).unwrap();
        assert!(!r.failures.is_empty());
        for f in &r.failures {
            assert!(r.is_gap(f.index));
            assert!(r.from_pct.column(f.index).iter().all(|v| v.is_nan()));
            assert!(f.error.contains("singular"), "{}", f.error);
        }
        assert!(r.total_pct.iter().any(Option::is_some));
    }

    #[test]
    fn single_combination_sweep_matches_roll() {
        let panel = sector_volatility_panel(3, 90, 8);
        let cfg = small_config(50);
        let direct = roll(&panel, &cfg).unwrap();
        let s = sweep(&panel, &SweepGrid::single(&cfg)).unwrap();
        assert_eq!(s.runs.len(), 1);
        assert_eq!(s.runs[0].outcome.as_ref().unwrap(), &direct);
        assert!(s.envelope.iter().all(|p| p.min == p.max && p.count == 1));
    }

    #[test]
    fn invalid_combinations_do_not_abort() {
        let panel = sector_volatility_panel(3, 60, 8);
        let grid = SweepGrid {
            windows: vec![30, 70],
            horizons: vec![0, 4],
            lags: vec![1],
            step: 5,
            include_intercept: true,
        };
        let s = sweep(&panel, &grid).unwrap();
        assert_eq!(s.runs.len(), 4);
        assert_eq!(s.successful().count(), 1);
        assert_eq!(s.failed().count(), 3);
        assert!(s.envelope.iter().all(|p| p.min <= p.median && p.median <= p.max));
    }
}
