//! OHLC panel loading, calendar alignment and validation.
//!
//! Two input layouts are accepted:
//!
//! * long form: a single CSV with header `series_id,date,open,high,low,close`;
//! * wide form: a manifest CSV with header `series_id,path` (optionally
//!   followed by `name` and `code` columns) pointing at one
//!   `date,open,high,low,close` file per series.
//!
//! Prices are raw index levels unless [`IngestConfig::already_log`] is set;
//! the loader takes natural logs before validation. Series are aligned on the
//! intersection of their calendars.

pub mod stats;
pub mod volatility;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::IngestError;

pub const LONG_HEADER: [&str; 6] = ["series_id", "date", "open", "high", "low", "close"];
pub const BAR_HEADER: [&str; 5] = ["date", "open", "high", "low", "close"];
pub const DATE_FORMAT: &str = "%Y-%m-%d";

const MIN_SERIES: usize = 2;

/// Identifier of one series in a panel.
///
/// `id` is the short label used in every output (e.g. `MechE`); `name` and
/// `code` carry optional descriptive metadata from a manifest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeriesInfo {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
}

impl SeriesInfo {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            name: None,
            code: None,
        }
    }
}

impl From<&str> for SeriesInfo {
    fn from(id: &str) -> Self {
        Self::new(id)
    }
}

/// One trading day of log-prices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OhlcBar {
    pub date: NaiveDate,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
}

impl OhlcBar {
    /// Builds a bar from log-prices, checking finiteness and the range
    /// ordering `low <= open, close <= high`.
    pub fn new(date: NaiveDate, open: f64, high: f64, low: f64, close: f64) -> Result<Self, String> {
        let bar = Self {
            date,
            open,
            high,
            low,
            close,
        };
        bar.check()?;
        Ok(bar)
    }

    /// Builds a bar from raw (positive) price levels by taking natural logs.
    pub fn from_levels(date: NaiveDate, open: f64, high: f64, low: f64, close: f64) -> Result<Self, String> {
        for (label, v) in [("open", open), ("high", high), ("low", low), ("close", close)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{label} level {v} is not a positive finite number"));
            }
        }
        Self::new(date, open.ln(), high.ln(), low.ln(), close.ln())
    }

    pub fn check(&self) -> Result<(), String> {
        let Self {
            open,
            high,
            low,
            close,
            ..
        } = *self;
        if ![open, high, low, close].iter().all(|v| v.is_finite()) {
            return Err("non-finite price".into());
        }
        if high < low {
            return Err(format!("high {high} below low {low}"));
        }
        if open < low || open > high {
            return Err(format!("open {open} outside [low {low}, high {high}]"));
        }
        if close < low || close > high {
            return Err(format!("close {close} outside [low {low}, high {high}]"));
        }
        Ok(())
    }
}

/// Loader settings. Also the `[ingest]` table of a run config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestConfig {
    /// Input prices are already natural logs.
    pub already_log: bool,
    /// Dates whose volatilities are removed for every series.
    pub exclusion_dates: Vec<NaiveDate>,
    /// Largest fraction of the union calendar that alignment may drop.
    pub max_drop_fraction: f64,
    /// Lag used by the ADF regression in descriptive statistics.
    pub adf_lag: usize,
    /// Minimum number of aligned dates.
    pub min_dates: usize,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            already_log: false,
            exclusion_dates: Vec::new(),
            max_drop_fraction: 0.05,
            adf_lag: 2,
            min_dates: 10,
        }
    }
}

/// Bookkeeping produced alongside a loaded panel.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadReport {
    pub rows_read: usize,
    /// Rows discarded because their date was missing from another series.
    pub rows_dropped: usize,
    /// Distinct dates discarded by calendar alignment.
    pub dates_dropped: usize,
    /// Exclusion dates that fell inside the aligned calendar.
    pub exclusions_applied: usize,
    /// Garman-Klass values below zero among the retained observations.
    pub negative_volatilities: usize,
    pub series: usize,
    pub dates: usize,
}

impl LoadReport {
    pub fn summary(&self) -> String {
        format!(
            "{} rows read, {} rows dropped ({} date{} dropped), {} exclusion{} applied, {} negative volatilit{}; panel {} series x {} dates",
            self.rows_read,
            self.rows_dropped,
            self.dates_dropped,
            if self.dates_dropped == 1 { "" } else { "s" },
            self.exclusions_applied,
            if self.exclusions_applied == 1 { "" } else { "s" },
            self.negative_volatilities,
            if self.negative_volatilities == 1 { "y" } else { "ies" },
            self.series,
            self.dates
        )
    }
}

/// Rectangular panel of OHLC bars on a shared calendar.
#[derive(Debug, Clone, PartialEq)]
pub struct OhlcPanel {
    series: Vec<SeriesInfo>,
    calendar: Vec<NaiveDate>,
    // series-major: bars[s][t]
    bars: Vec<Vec<OhlcBar>>,
    exclusion_dates: BTreeSet<NaiveDate>,
}

impl OhlcPanel {
    pub fn new(
        series: Vec<SeriesInfo>,
        calendar: Vec<NaiveDate>,
        bars: Vec<Vec<OhlcBar>>,
        exclusion_dates: impl IntoIterator<Item = NaiveDate>,
    ) -> Result<Self, IngestError> {
        if bars.len() != series.len() {
            return Err(IngestError::Schema(format!(
                "{} series ids but {} bar rows",
                series.len(),
                bars.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for s in &series {
            if !seen.insert(s.id.as_str()) {
                return Err(IngestError::Schema(format!("duplicate series id '{}'", s.id)));
            }
        }
        if let Some(w) = calendar.windows(2).find(|w| w[0] >= w[1]) {
            return Err(IngestError::Schema(format!(
                "calendar not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        for (info, row) in series.iter().zip(&bars) {
            if row.len() != calendar.len() {
                return Err(IngestError::Schema(format!(
                    "series '{}' has {} bars for {} calendar dates",
                    info.id,
                    row.len(),
                    calendar.len()
                )));
            }
            for (bar, date) in row.iter().zip(&calendar) {
                if bar.date != *date {
                    return Err(IngestError::Schema(format!(
                        "series '{}' bar dated {} at calendar position {}",
                        info.id, bar.date, date
                    )));
                }
                bar.check().map_err(|reason| IngestError::Validation {
                    series: info.id.clone(),
                    date: *date,
                    reason,
                })?;
            }
        }
        Ok(Self {
            series,
            calendar,
            bars,
            exclusion_dates: exclusion_dates.into_iter().collect(),
        })
    }

    pub fn series(&self) -> &[SeriesInfo] {
        &self.series
    }

    pub fn series_ids(&self) -> Vec<String> {
        self.series.iter().map(|s| s.id.clone()).collect()
    }

    pub fn calendar(&self) -> &[NaiveDate] {
        &self.calendar
    }

    pub fn bars(&self, series: usize) -> &[OhlcBar] {
        &self.bars[series]
    }

    pub fn exclusion_dates(&self) -> &BTreeSet<NaiveDate> {
        &self.exclusion_dates
    }

    pub fn n_series(&self) -> usize {
        self.series.len()
    }

    pub fn n_dates(&self) -> usize {
        self.calendar.len()
    }

    /// Calendar dates that survive the exclusion list.
    pub fn retained_dates(&self) -> impl Iterator<Item = (usize, NaiveDate)> + '_ {
        self.calendar
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, d)| !self.exclusion_dates.contains(d))
    }
}

/// Loads a panel from a long-form CSV or a wide-form manifest.
///
/// The layout is detected from the header row.
pub fn load_panel(source: &Path, config: &IngestConfig) -> Result<(OhlcPanel, LoadReport), IngestError> {
    let text = read_to_string(source)?;
    let header = text.lines().next().unwrap_or("");
    let columns: Vec<String> = header.split(',').map(|c| c.trim().to_ascii_lowercase()).collect();
    if columns.len() >= 2 && columns[0] == "series_id" && columns[1] == "path" {
        load_manifest(source, &text, config)
    } else {
        parse_long_csv(text.as_bytes(), &source.display().to_string(), config)
    }
}

/// Parses long-form CSV content. `label` names the source in error messages.
pub fn parse_long_csv<R: Read>(
    reader: R,
    label: &str,
    config: &IngestConfig,
) -> Result<(OhlcPanel, LoadReport), IngestError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    check_header(&mut rdr, &LONG_HEADER, label)?;
    let mut collector = Collector::default();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(label, e))?;
        let line = line_of(&record);
        let id = record.get(0).unwrap_or("");
        if id.is_empty() {
            return Err(parse_err(label, line, "empty series_id"));
        }
        let (date, bar) = parse_bar(&record, 1, label, line)?;
        collector.push(SeriesInfo::new(id), date, bar, label, line, config)?;
    }
    collector.finish(config)
}

fn load_manifest(source: &Path, text: &str, config: &IngestConfig) -> Result<(OhlcPanel, LoadReport), IngestError> {
    let label = source.display().to_string();
    let base = source.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| csv_error(&label, e))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let (name_col, code_col) = (col("name"), col("code"));
    let mut collector = Collector::default();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(&label, e))?;
        let line = line_of(&record);
        let id = record.get(0).unwrap_or("");
        let rel = record.get(1).unwrap_or("");
        if id.is_empty() || rel.is_empty() {
            return Err(parse_err(&label, line, "manifest rows need series_id and path"));
        }
        let info = SeriesInfo {
            id: id.to_string(),
            name: name_col.and_then(|c| record.get(c)).filter(|s| !s.is_empty()).map(String::from),
            code: code_col.and_then(|c| record.get(c)).filter(|s| !s.is_empty()).map(String::from),
        };
        let path: PathBuf = if Path::new(rel).is_absolute() {
            rel.into()
        } else {
            base.join(rel)
        };
        let series_label = path.display().to_string();
        let body = read_to_string(&path)?;
        let mut srdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(body.as_bytes());
        check_header(&mut srdr, &BAR_HEADER, &series_label)?;
        for rec in srdr.records() {
            let rec = rec.map_err(|e| csv_error(&series_label, e))?;
            let line = line_of(&rec);
            let (date, bar) = parse_bar(&rec, 0, &series_label, line)?;
            collector.push(info.clone(), date, bar, &series_label, line, config)?;
        }
    }
    collector.finish(config)
}

#[derive(Default)]
struct Collector {
    order: Vec<SeriesInfo>,
    index: HashMap<String, usize>,
    rows: Vec<BTreeMap<NaiveDate, OhlcBar>>,
    rows_read: usize,
}

impl Collector {
    fn push(
        &mut self,
        info: SeriesInfo,
        date: NaiveDate,
        raw: [f64; 4],
        label: &str,
        line: u64,
        config: &IngestConfig,
    ) -> Result<(), IngestError> {
        self.rows_read += 1;
        let [o, h, l, c] = raw;
        let bar = if config.already_log {
            OhlcBar::new(date, o, h, l, c)
        } else {
            OhlcBar::from_levels(date, o, h, l, c)
        }
        .map_err(|reason| IngestError::Validation {
            series: info.id.clone(),
            date,
            reason,
        })?;
        let slot = match self.index.get(&info.id) {
            Some(&i) => i,
            None => {
                self.index.insert(info.id.clone(), self.order.len());
                self.order.push(info);
                self.rows.push(BTreeMap::new());
                self.order.len() - 1
            }
        };
        if self.rows[slot].insert(date, bar).is_some() {
            return Err(parse_err(
                label,
                line,
                &format!("duplicate date {date} for series '{}'", self.order[slot].id),
            ));
        }
        Ok(())
    }

    fn finish(self, config: &IngestConfig) -> Result<(OhlcPanel, LoadReport), IngestError> {
        let union: BTreeSet<NaiveDate> = self.rows.iter().flat_map(|r| r.keys().copied()).collect();
        let calendar: Vec<NaiveDate> = union
            .iter()
            .copied()
            .filter(|d| self.rows.iter().all(|r| r.contains_key(d)))
            .collect();
        let dates_dropped = union.len() - calendar.len();
        if !union.is_empty() {
            let fraction = dates_dropped as f64 / union.len() as f64;
            if fraction > config.max_drop_fraction {
                return Err(IngestError::Alignment {
                    dropped: dates_dropped,
                    total: union.len(),
                    fraction,
                    allowed: config.max_drop_fraction,
                });
            }
        }
        if self.order.len() < MIN_SERIES || calendar.len() < config.min_dates {
            return Err(IngestError::TooSmall {
                series: self.order.len(),
                dates: calendar.len(),
                min_series: MIN_SERIES,
                min_dates: config.min_dates,
            });
        }
        let rows_dropped: usize = self.rows.iter().map(|r| r.len() - calendar.len()).sum();
        let bars: Vec<Vec<OhlcBar>> = self
            .rows
            .iter()
            .map(|r| calendar.iter().map(|d| r[d]).collect())
            .collect();
        let panel = OhlcPanel::new(self.order, calendar, bars, config.exclusion_dates.iter().copied())?;
        let exclusions_applied = panel
            .calendar()
            .iter()
            .filter(|d| panel.exclusion_dates().contains(d))
            .count();
        let negative_volatilities = (0..panel.n_series())
            .map(|s| {
                panel
                    .retained_dates()
                    .filter(|&(t, _)| volatility::garman_klass(&panel.bars(s)[t]) < 0.0)
                    .count()
            })
            .sum();
        let report = LoadReport {
            rows_read: self.rows_read,
            rows_dropped,
            dates_dropped,
            exclusions_applied,
            negative_volatilities,
            series: panel.n_series(),
            dates: panel.n_dates(),
        };
        Ok((panel, report))
    }
}

fn read_to_string(path: &Path) -> Result<String, IngestError> {
    let mut s = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    Ok(s)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str], label: &str) -> Result<(), IngestError> {
    let headers = rdr.headers().map_err(|e| csv_error(label, e))?;
    let got: Vec<String> = headers.iter().map(|h| h.to_ascii_lowercase()).collect();
    if got.len() != expected.len() || got.iter().zip(expected).any(|(g, e)| g != e) {
        return Err(parse_err(
            label,
            1,
            &format!("expected header `{}`, found `{}`", expected.join(","), got.join(",")),
        ));
    }
    Ok(())
}

fn parse_bar(record: &csv::StringRecord, offset: usize, label: &str, line: u64) -> Result<(NaiveDate, [f64; 4]), IngestError> {
    if record.len() != offset + 5 {
        return Err(parse_err(
            label,
            line,
            &format!("expected {} fields, found {}", offset + 5, record.len()),
        ));
    }
    let date_str = &record[offset];
    let date = NaiveDate::parse_from_str(date_str, DATE_FORMAT)
        .map_err(|e| parse_err(label, line, &format!("bad date '{date_str}': {e}")))?;
    let mut values = [0.0; 4];
    for (k, v) in values.iter_mut().enumerate() {
        let field = &record[offset + 1 + k];
        *v = field
            .parse::<f64>()
            .map_err(|_| parse_err(label, line, &format!("bad {} value '{field}'", BAR_HEADER[k + 1])))?;
    }
    Ok((date, values))
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn parse_err(file: &str, line: u64, message: &str) -> IngestError {
    IngestError::Parse {
        file: file.to_string(),
        line,
        message: message.to_string(),
    }
}

fn csv_error(file: &str, e: csv::Error) -> IngestError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    parse_err(file, line, &e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, DATE_FORMAT).unwrap()
    }

    fn small_config() -> IngestConfig {
        IngestConfig {
            min_dates: 2,
            max_drop_fraction: 0.25,
            ..IngestConfig::default()
        }
    }

    fn long_csv(rows: &[(&str, &str, [f64; 4])]) -> String {
        let mut s = String::from("series_id,date,open,high,low,close\n");
        for (id, date, [o, h, l, c]) in rows {
            s.push_str(&format!("{id},{date},{o},{h},{l},{c}\n"));
        }
        s
    }

    const DATES: [&str; 5] = ["2020-01-02", "2020-01-03", "2020-01-06", "2020-01-07", "2020-01-08"];

    #[test]
    fn identical_calendars_need_no_alignment() {
        let mut rows = Vec::new();
        for id in ["A", "B"] {
            for date in DATES {
                rows.push((id, date, [100.0, 102.0, 99.0, 101.0]));
            }
        }
        let (panel, report) = parse_long_csv(long_csv(&rows).as_bytes(), "mem", &small_config()).unwrap();
        assert_eq!(panel.n_series(), 2);
        assert_eq!(panel.n_dates(), 5);
        assert_eq!(report.rows_dropped, 0);
        assert_eq!(report.dates_dropped, 0);
        assert_eq!(report.rows_read, 10);
    }

    #[test]
    fn missing_date_is_dropped_from_all_series() {
        let mut rows = Vec::new();
        for date in DATES {
            rows.push(("A", date, [100.0, 102.0, 99.0, 101.0]));
        }
        for date in DATES.iter().filter(|d| **d != "2020-01-06") {
            rows.push(("B", date, [50.0, 51.0, 49.0, 50.5]));
        }
        let (panel, report) = parse_long_csv(long_csv(&rows).as_bytes(), "mem", &small_config()).unwrap();
        assert_eq!(panel.n_dates(), 4);
        assert_eq!(report.dates_dropped, 1);
        assert_eq!(report.rows_dropped, 1);
        assert!(report.summary().contains("1 date dropped"));
        assert!(!panel.calendar().contains(&d("2020-01-06")));
    }

    #[test]
    fn drop_fraction_above_tolerance_is_an_alignment_error() {
        let mut rows = Vec::new();
        for date in DATES {
            rows.push(("A", date, [100.0, 102.0, 99.0, 101.0]));
        }
        for date in &DATES[..3] {
            rows.push(("B", date, [50.0, 51.0, 49.0, 50.5]));
        }
        let err = parse_long_csv(long_csv(&rows).as_bytes(), "mem", &small_config()).unwrap_err();
        assert!(matches!(err, IngestError::Alignment { dropped: 2, total: 5, .. }), "{err}");
    }

    #[test]
    fn high_below_low_names_series_and_date() {
        let mut rows = Vec::new();
        for id in ["A", "B"] {
            for date in DATES {
                rows.push((id, date, [100.0, 102.0, 99.0, 101.0]));
            }
        }
        rows[7] = ("B", "2020-01-06", [100.0, 98.0, 99.0, 99.0]);
        let err = parse_long_csv(long_csv(&rows).as_bytes(), "mem", &small_config()).unwrap_err();
        match err {
            IngestError::Validation { series, date, .. } => {
                assert_eq!(series, "B");
                assert_eq!(date, d("2020-01-06"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn malformed_row_reports_line_number() {
        let text = "series_id,date,open,high,low,close\nA,2020-01-02,1,2,1,1\nA,2020-01-03,1,x,1,1\n";
        let err = parse_long_csv(text.as_bytes(), "mem", &small_config()).unwrap_err();
        match err {
            IngestError::Parse { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("high"), "{message}");
            }
            other => panic!("unexpected {other}"),
        }
        let bad_date = "series_id,date,open,high,low,close\nA,02/01/2020,1,2,1,1\n";
        assert!(matches!(
            parse_long_csv(bad_date.as_bytes(), "mem", &small_config()),
            Err(IngestError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn wrong_header_is_rejected() {
        let text = "id,date,o,h,l,c\nA,2020-01-02,1,2,1,1\n";
        assert!(matches!(
            parse_long_csv(text.as_bytes(), "mem", &small_config()),
            Err(IngestError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn nonpositive_level_rejected_unless_already_log() {
        let rows: Vec<_> = ["A", "B"]
            .iter()
            .flat_map(|id| DATES.iter().map(move |d| (*id, *d, [0.0, 0.1, -0.1, 0.0])))
            .collect();
        let text = long_csv(&rows);
        assert!(matches!(
            parse_long_csv(text.as_bytes(), "mem", &small_config()),
            Err(IngestError::Validation { .. })
        ));
        let cfg = IngestConfig {
            already_log: true,
            ..small_config()
        };
        let (panel, _) = parse_long_csv(text.as_bytes(), "mem", &cfg).unwrap();
        assert_eq!(panel.bars(0)[0].low, -0.1);
    }

    #[test]
    fn default_minimum_needs_ten_dates() {
        let rows: Vec<_> = ["A", "B"]
            .iter()
            .flat_map(|id| DATES.iter().map(move |d| (*id, *d, [1.0, 1.0, 1.0, 1.0])))
            .collect();
        let err = parse_long_csv(long_csv(&rows).as_bytes(), "mem", &IngestConfig::default()).unwrap_err();
        assert!(matches!(err, IngestError::TooSmall { dates: 5, .. }));
    }

    #[test]
    fn duplicate_dates_are_parse_errors() {
        let text = "series_id,date,open,high,low,close\nA,2020-01-02,1,2,1,1\nA,2020-01-02,1,2,1,1\n";
        assert!(matches!(
            parse_long_csv(text.as_bytes(), "mem", &small_config()),
            Err(IngestError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn exclusions_are_counted() {
        let rows: Vec<_> = ["A", "B"]
            .iter()
            .flat_map(|id| DATES.iter().map(move |d| (*id, *d, [100.0, 102.0, 99.0, 101.0])))
            .collect();
        let cfg = IngestConfig {
            exclusion_dates: vec![d("2020-01-03"), d("1999-01-01")],
            ..small_config()
        };
        let (panel, report) = parse_long_csv(long_csv(&rows).as_bytes(), "mem", &cfg).unwrap();
        assert_eq!(report.exclusions_applied, 1);
        assert_eq!(panel.retained_dates().count(), 4);
    }

    #[test]
    fn manifest_layout_loads_each_file() {
        let dir = tempfile::tempdir().unwrap();
        let mut manifest = String::from("series_id,path,name,code\n");
        for (id, name) in [("Bank", "Bank"), ("NBF", "Non-bank financial")] {
            let mut body = String::from("date,open,high,low,close\n");
            for date in DATES {
                body.push_str(&format!("{date},10,11,9,10.5\n"));
            }
            std::fs::write(dir.path().join(format!("{id}.csv")), body).unwrap();
            manifest.push_str(&format!("{id},{id}.csv,{name},8017\n"));
        }
        let path = dir.path().join("manifest.csv");
        std::fs::write(&path, manifest).unwrap();
        let (panel, report) = load_panel(&path, &small_config()).unwrap();
        assert_eq!(panel.series_ids(), vec!["Bank", "NBF"]);
        assert_eq!(panel.series()[1].name.as_deref(), Some("Non-bank financial"));
        assert_eq!(report.rows_read, 10);
    }
}
