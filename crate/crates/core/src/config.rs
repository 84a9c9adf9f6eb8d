//! Run configuration: a TOML file whose every key defaults to the baseline
//! setup (lag 2, horizon 10, 240-day windows stepped by one day).
//!
//! ```toml
//! threads = 4
//! out = "results"
//!
//! [ingest]
//! exclusion_dates = ["2014-02-21"]
//!
//! [model]
//! lag = 2
//! horizon = 10
//!
//! [rolling]
//! window = 240
//! step = 1
//!
//! [[subperiods]]
//! name = "crisis"
//! start = "2007-01-01"
//! end = "2008-12-31"
//!
//! [sweep]
//! windows = [220, 240, 260]
//! horizons = [5, 10, 15]
//! lags = [1, 2, 3, 4, 5]
//! ```

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::ingest::{IngestConfig, DATE_FORMAT};
use crate::netgraph::PageRankConfig;
use crate::rolling::{RollingConfig, SweepGrid};
use crate::var::VarSpec;

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "SPILLNET_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub lag: usize,
    pub include_intercept: bool,
    pub horizon: usize,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            lag: 2,
            include_intercept: true,
            horizon: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RollingSection {
    pub window: usize,
    pub step: usize,
}

impl Default for RollingSection {
    fn default() -> Self {
        Self { window: 240, step: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub windows: Vec<usize>,
    pub horizons: Vec<usize>,
    pub lags: Vec<usize>,
}

impl Default for SweepSection {
    fn default() -> Self {
        let g = SweepGrid::default();
        Self {
            windows: g.windows,
            horizons: g.horizons,
            lags: g.lags,
        }
    }
}

/// Named inclusive date range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Subperiod {
    pub name: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl Subperiod {
    /// Parses `NAME=START:END` with ISO dates.
    pub fn parse(spec: &str) -> Result<Self, Error> {
        let bad = || Error::Config(format!("subperiod '{spec}' is not NAME=YYYY-MM-DD:YYYY-MM-DD"));
        let (name, range) = spec.split_once('=').ok_or_else(bad)?;
        let (start, end) = range.split_once(':').ok_or_else(bad)?;
        let parse = |s: &str| NaiveDate::parse_from_str(s.trim(), DATE_FORMAT).map_err(|_| bad());
        let name = name.trim();
        if name.is_empty() || name.contains(['/', '\\']) {
            return Err(bad());
        }
        let (start, end) = (parse(start)?, parse(end)?);
        if start > end {
            return Err(Error::Config(format!("subperiod '{name}' starts after it ends")));
        }
        Ok(Self {
            name: name.to_string(),
            start,
            end,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub ingest: IngestConfig,
    pub model: ModelSection,
    pub rolling: RollingSection,
    pub subperiods: Vec<Subperiod>,
    pub sweep: SweepSection,
    pub pagerank: PageRankConfig,
    pub out: PathBuf,
    /// Worker threads for windowed analysis; 0 uses every core.
    pub threads: usize,
    pub format: OutputFormat,
    /// Round printed numbers to two decimals.
    pub two_decimals: bool,
    /// Also write DOT graph descriptions.
    pub dot: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            ingest: IngestConfig::default(),
            model: ModelSection::default(),
            rolling: RollingSection::default(),
            subperiods: Vec::new(),
            sweep: SweepSection::default(),
            pagerank: PageRankConfig::default(),
            out: PathBuf::from("spillnet-out"),
            threads: 0,
            format: OutputFormat::Csv,
            two_decimals: false,
            dot: false,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, Error> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn var_spec(&self) -> VarSpec {
        VarSpec {
            lag_order: self.model.lag,
            include_intercept: self.model.include_intercept,
        }
    }

    pub fn rolling_config(&self) -> RollingConfig {
        RollingConfig {
            window: self.rolling.window,
            step: self.rolling.step,
            var_spec: self.var_spec(),
            horizon: self.model.horizon,
        }
    }

    pub fn sweep_grid(&self) -> SweepGrid {
        SweepGrid {
            windows: self.sweep.windows.clone(),
            horizons: self.sweep.horizons.clone(),
            lags: self.sweep.lags.clone(),
            step: self.rolling.step,
            include_intercept: self.model.include_intercept,
        }
    }
}
