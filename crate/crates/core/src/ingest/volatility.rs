//! Garman-Klass daily variance and the volatility panel fed to the VAR.

use std::ops::Range;

use chrono::NaiveDate;
use nalgebra::DMatrix;

use super::{OhlcBar, OhlcPanel, SeriesInfo};
use crate::error::{Error, IngestError};

/// Garman-Klass variance estimate of one bar of log-prices.
///
/// `0.511(H-L)^2 - 0.019[(C-O)(H+L-2O) - 2(H-O)(L-O)] - 0.383(C-O)^2`
///
/// Only price differences enter, so the value is unchanged when a constant
/// is added to all four prices. It can be slightly negative on
/// near-degenerate bars; callers receive the raw value.
pub fn garman_klass(bar: &OhlcBar) -> f64 {
    let OhlcBar {
        open: o,
        high: h,
        low: l,
        close: c,
        ..
    } = *bar;
    0.511 * (h - l).powi(2) - 0.019 * ((c - o) * (h + l - 2.0 * o) - 2.0 * (h - o) * (l - o)) - 0.383 * (c - o).powi(2)
}

/// N x T matrix of daily volatilities: one row per series, one column per
/// retained trading date.
#[derive(Debug, Clone, PartialEq)]
pub struct VolatilityPanel {
    series: Vec<SeriesInfo>,
    dates: Vec<NaiveDate>,
    values: DMatrix<f64>,
}

impl VolatilityPanel {
    pub fn new(series: Vec<SeriesInfo>, dates: Vec<NaiveDate>, values: DMatrix<f64>) -> Result<Self, IngestError> {
        if values.nrows() != series.len() || values.ncols() != dates.len() {
            return Err(IngestError::Schema(format!(
                "values are {}x{} but there are {} series and {} dates",
                values.nrows(),
                values.ncols(),
                series.len(),
                dates.len()
            )));
        }
        if let Some(w) = dates.windows(2).find(|w| w[0] >= w[1]) {
            return Err(IngestError::Schema(format!(
                "dates not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            let (r, c) = (pos % values.nrows(), pos / values.nrows());
            return Err(IngestError::Validation {
                series: series[r].id.clone(),
                date: dates[c],
                reason: "non-finite volatility".into(),
            });
        }
        let mut ids: Vec<&str> = series.iter().map(|s| s.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(IngestError::Schema(format!("duplicate series id '{}'", w[0])));
        }
        Ok(Self { series, dates, values })
    }

    /// Builds a panel with generated ids `S1..SN` and consecutive calendar
    /// days starting at `start`. Handy for simulated data.
    pub fn from_matrix(values: DMatrix<f64>, start: NaiveDate) -> Result<Self, IngestError> {
        let series = (1..=values.nrows()).map(|i| SeriesInfo::new(format!("S{i}"))).collect();
        let dates = start.iter_days().take(values.ncols()).collect();
        Self::new(series, dates, values)
    }

    pub fn series(&self) -> &[SeriesInfo] {
        &self.series
    }

    pub fn series_ids(&self) -> Vec<String> {
        self.series.iter().map(|s| s.id.clone()).collect()
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn n_series(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_obs(&self) -> usize {
        self.values.ncols()
    }

    pub fn row(&self, series: usize) -> Vec<f64> {
        self.values.row(series).iter().copied().collect()
    }

    pub fn negative_count(&self) -> usize {
        self.values.iter().filter(|v| **v < 0.0).count()
    }

    /// Copy of the observations in `range` (column indices).
    pub fn columns(&self, range: Range<usize>) -> Self {
        Self {
            series: self.series.clone(),
            dates: self.dates[range.clone()].to_vec(),
            values: self.values.columns(range.start, range.len()).into_owned(),
        }
    }

    /// Observations dated within `start..=end`.
    pub fn slice_dates(&self, start: NaiveDate, end: NaiveDate) -> Result<Self, Error> {
        let lo = self.dates.partition_point(|d| *d < start);
        let hi = self.dates.partition_point(|d| *d <= end);
        if lo >= hi {
            return Err(Error::EmptySlice { start, end });
        }
        Ok(self.columns(lo..hi))
    }

    /// Reorders series so that new row `k` is old row `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let values = DMatrix::from_fn(self.n_series(), self.n_obs(), |r, c| self.values[(order[r], c)]);
        Self {
            series: order.iter().map(|&i| self.series[i].clone()).collect(),
            dates: self.dates.clone(),
            values,
        }
    }
}

/// Applies [`garman_klass`] to every bar and drops excluded dates.
pub fn panel_volatility(panel: &OhlcPanel) -> VolatilityPanel {
    let kept: Vec<(usize, NaiveDate)> = panel.retained_dates().collect();
    let values = DMatrix::from_fn(panel.n_series(), kept.len(), |s, k| garman_klass(&panel.bars(s)[kept[k].0]));
    VolatilityPanel {
        series: panel.series().to_vec(),
        dates: kept.into_iter().map(|(_, d)| d).collect(),
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn date(k: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(2021, 3, 1).unwrap() + chrono::Days::new(k as u64)
    }

    fn bar(o: f64, h: f64, l: f64, c: f64) -> OhlcBar {
        OhlcBar::new(date(0), o, h, l, c).unwrap()
    }

    #[test]
    fn degenerate_bar_is_zero() {
        assert_eq!(garman_klass(&bar(4.6, 4.6, 4.6, 4.6)), 0.0);
    }

    #[test]
    fn hand_evaluated_bars() {
        assert!((garman_klass(&bar(0.0, 0.02, -0.01, 0.01)) - 4.121e-4).abs() < 1e-12);
        assert!((garman_klass(&bar(0.0, 0.03, 0.0, 0.03)) - 9.81e-5).abs() < 1e-12);
    }

    fn toy_panel(exclude: &[NaiveDate], degenerate: bool) -> OhlcPanel {
        let calendar: Vec<_> = (0..5).map(date).collect();
        let bars = (0..2)
            .map(|s| {
                calendar
                    .iter()
                    .enumerate()
                    .map(|(t, d)| {
                        let base = 4.0 + 0.01 * (s + t) as f64;
                        if degenerate {
                            OhlcBar::new(*d, base, base, base, base).unwrap()
                        } else {
                            OhlcBar::new(*d, base, base + 0.02, base - 0.01, base + 0.005).unwrap()
                        }
                    })
                    .collect()
            })
            .collect();
        OhlcPanel::new(vec!["A".into(), "B".into()], calendar, bars, exclude.iter().copied()).unwrap()
    }

    #[test]
    fn panel_shape_follows_exclusions() {
        let full = panel_volatility(&toy_panel(&[], false));
        assert_eq!((full.n_series(), full.n_obs()), (2, 5));
        let cut = panel_volatility(&toy_panel(&[date(2), date(40)], false));
        assert_eq!((cut.n_series(), cut.n_obs()), (2, 4));
        assert!(!cut.dates().contains(&date(2)));
        assert_eq!(cut.series_ids(), vec!["A", "B"]);
    }

    #[test]
    fn degenerate_panel_is_all_zero() {
        let v = panel_volatility(&toy_panel(&[], true));
        assert!(v.values().iter().all(|x| *x == 0.0));
    }

    #[test]
    fn slicing_by_date() {
        let v = panel_volatility(&toy_panel(&[], false));
        let s = v.slice_dates(date(1), date(3)).unwrap();
        assert_eq!(s.dates(), &[date(1), date(2), date(3)]);
        assert!(matches!(v.slice_dates(date(10), date(20)), Err(Error::EmptySlice { .. })));
    }

    proptest! {
        #[test]
        fn translation_invariance(
            o in -1.0f64..1.0, span in 0.0f64..0.1, a in 0.0f64..1.0, b in 0.0f64..1.0, shift in -10.0f64..10.0
        ) {
            let low = o - a * span;
            let high = low + span;
            let close = low + b * span;
            let open = o.clamp(low, high);
            let base = garman_klass(&bar(open, high, low, close));
            let moved = garman_klass(&bar(open + shift, high + shift, low + shift, close + shift));
            prop_assert!((base - moved).abs() < 1e-12);
        }
    }
}
