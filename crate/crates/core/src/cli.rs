//! The `spillnet` command line: `describe`, `static`, `roll` and `sweep`.
//!
//! Settings come from a TOML config (`--config` or `$SPILLNET_CONFIG`) with
//! flags layered on top. Every command writes into `--out`.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::config::{OutputFormat, RunConfig, Subperiod, CONFIG_ENV};
use crate::connect::{connectedness, net_pairwise, Measure};
use crate::error::Error;
use crate::export::{self, NumberFormat};
use crate::fevd::gfevd;
use crate::ingest::stats::describe;
use crate::ingest::volatility::{panel_volatility, VolatilityPanel};
use crate::ingest::{load_panel, LoadReport};
use crate::netgraph::{build_network, max_out_subgraph, pagerank_with};
use crate::rolling::{roll, sweep, with_threads};
use crate::var::fit_var;

#[derive(Debug, Parser)]
#[command(name = "spillnet", version, about = "Volatility-spillover connectedness toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Descriptive statistics and ADF tests of each volatility series.
    Describe { input: PathBuf },
    /// Full-sample (and per-subperiod) connectedness table and network.
    Static { input: PathBuf },
    /// Rolling-window total and directional connectedness.
    Roll { input: PathBuf },
    /// Rolling analysis over a grid of window sizes, horizons and lags.
    Sweep { input: PathBuf },
}

#[derive(Debug, Args, Default)]
pub struct Overrides {
    /// TOML run configuration.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    /// VAR lag order.
    #[arg(long, global = true)]
    pub lag: Option<usize>,
    /// Forecast horizon in days.
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Rolling window length in observations.
    #[arg(long, global = true)]
    pub window: Option<usize>,
    /// Rolling step in observations.
    #[arg(long, global = true)]
    pub step: Option<usize>,
    /// Named date range NAME=YYYY-MM-DD:YYYY-MM-DD (repeatable).
    #[arg(long = "subperiod", global = true, value_name = "NAME=START:END")]
    pub subperiods: Vec<String>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Also write Graphviz DOT files.
    #[arg(long, global = true)]
    pub dot: bool,
    /// Print numbers with two decimals instead of full precision.
    #[arg(long, global = true)]
    pub two_decimals: bool,
}

impl Overrides {
    pub fn resolve(&self) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.lag {
            cfg.model.lag = v;
        }
        if let Some(v) = self.horizon {
            cfg.model.horizon = v;
        }
        if let Some(v) = self.window {
            cfg.rolling.window = v;
        }
        if let Some(v) = self.step {
            cfg.rolling.step = v;
        }
        if let Some(v) = self.threads {
            cfg.threads = v;
        }
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        cfg.dot |= self.dot;
        cfg.two_decimals |= self.two_decimals;
        for s in &self.subperiods {
            cfg.subperiods.push(Subperiod::parse(s)?);
        }
        Ok(cfg)
    }
}

/// What a finished command produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

pub fn run(cli: &Cli) -> Result<Outcome, Error> {
    let cfg = cli.overrides.resolve()?;
    fs::create_dir_all(&cfg.out).map_err(|source| Error::Io {
        path: cfg.out.clone(),
        source,
    })?;
    let mut out = Outcome::default();
    match &cli.command {
        Command::Describe { input } => cmd_describe(input, &cfg, &mut out)?,
        Command::Static { input } => cmd_static(input, &cfg, &mut out)?,
        Command::Roll { input } => cmd_roll(input, &cfg, &mut out)?,
        Command::Sweep { input } => cmd_sweep(input, &cfg, &mut out)?,
    }
    Ok(out)
}

fn create(path: &Path, out: &mut Outcome) -> Result<BufWriter<File>, Error> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| Error::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    out.files.push(path.to_path_buf());
    File::create(path).map(BufWriter::new).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_json(path: &Path, value: &serde_json::Value, out: &mut Outcome) -> Result<(), Error> {
    let mut w = create(path, out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Output(e.to_string()))?;
    std::io::Write::write_all(&mut w, b"\n").map_err(|e| Error::Output(e.to_string()))
}

fn load(input: &Path, cfg: &RunConfig, out: &mut Outcome) -> Result<(VolatilityPanel, LoadReport), Error> {
    let (panel, report) = load_panel(input, &cfg.ingest)?;
    eprintln!("loaded {}: {}", input.display(), report.summary());
    write_json(&cfg.out.join("load_report.json"), &serde_json::to_value(&report).expect("report"), out)?;
    Ok((panel_volatility(&panel), report))
}

fn nf(cfg: &RunConfig) -> NumberFormat {
    NumberFormat {
        two_decimals: cfg.two_decimals,
    }
}

pub fn cmd_describe(input: &Path, cfg: &RunConfig, out: &mut Outcome) -> Result<(), Error> {
    let (vol, _) = load(input, cfg, out)?;
    let rows: Vec<_> = vol
        .series()
        .iter()
        .enumerate()
        .map(|(i, info)| (info.clone(), describe(&vol.row(i), cfg.ingest.adf_lag)))
        .collect();
    for (info, stats) in &rows {
        if let Err(e) = stats {
            let msg = format!("series '{}': {e}", info.id);
            eprintln!("warning: {msg}");
            out.warnings.push(msg);
        }
    }
    match cfg.format {
        OutputFormat::Csv => {
            let w = create(&cfg.out.join("descriptive_stats.csv"), out)?;
            export::write_descriptive_csv(w, &rows, nf(cfg))?;
        }
        OutputFormat::Json => {
            let value = json!(rows
                .iter()
                .map(|(info, s)| json!({
                    "series": info,
                    "stats": s.as_ref().ok(),
                    "status": s.as_ref().err().map(|e| e.to_string()).unwrap_or_else(|| "ok".into()),
                }))
                .collect::<Vec<_>>());
            write_json(&cfg.out.join("descriptive_stats.json"), &value, out)?;
        }
    }
    Ok(())
}

fn static_outputs(vol: &VolatilityPanel, cfg: &RunConfig, dir: &Path, out: &mut Outcome) -> Result<(), Error> {
    let model = fit_var(vol, cfg.var_spec())?;
    if !model.stable {
        let msg = format!(
            "{}: fitted VAR is not stable (max companion modulus {})",
            dir.display(),
            model.max_companion_modulus
        );
        eprintln!("warning: {msg}");
        out.warnings.push(msg);
    }
    let fevd = gfevd(&model, cfg.model.horizon)?;
    let table = connectedness(&fevd);
    let npm = net_pairwise(&fevd);
    let network = build_network(&npm, &table)?;
    let pr = pagerank_with(&network, &cfg.pagerank)?;
    let sub = max_out_subgraph(&network);
    let fmt = nf(cfg);
    write_json(&dir.join("var_model.json"), &export::model_json(&model), out)?;
    match cfg.format {
        OutputFormat::Csv => {
            export::write_connectedness_csv(create(&dir.join("connectedness.csv"), out)?, &table, fmt)?;
            export::write_fevd_csv(create(&dir.join("fevd.csv"), out)?, &fevd, fmt)?;
            export::write_net_pairwise_csv(create(&dir.join("net_pairwise.csv"), out)?, &npm, fmt)?;
            export::write_edges_csv(create(&dir.join("edges.csv"), out)?, &network, fmt)?;
            export::write_edges_csv(create(&dir.join("max_out_edges.csv"), out)?, &sub, fmt)?;
            export::write_nodes_csv(create(&dir.join("nodes.csv"), out)?, &network, Some(&pr), fmt)?;
        }
        OutputFormat::Json => {
            write_json(&dir.join("connectedness.json"), &export::connectedness_json(&table, fmt), out)?;
            write_json(&dir.join("network.json"), &export::network_json(&network, Some(&pr), fmt), out)?;
            write_json(&dir.join("max_out_network.json"), &export::network_json(&sub, None, fmt), out)?;
        }
    }
    if cfg.dot {
        export::write_dot(create(&dir.join("network.dot"), out)?, &network, "spillover")?;
        export::write_dot(create(&dir.join("max_out.dot"), out)?, &sub, "max_outgoing")?;
    }
    Ok(())
}

pub fn cmd_static(input: &Path, cfg: &RunConfig, out: &mut Outcome) -> Result<(), Error> {
    let (vol, _) = load(input, cfg, out)?;
    // slice everything up front so an empty range fails before any output
    let slices = cfg
        .subperiods
        .iter()
        .map(|s| Ok((s, vol.slice_dates(s.start, s.end)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    static_outputs(&vol, cfg, &cfg.out, out)?;
    for (period, slice) in slices {
        static_outputs(&slice, cfg, &cfg.out.join(&period.name), out)?;
    }
    Ok(())
}

pub fn cmd_roll(input: &Path, cfg: &RunConfig, out: &mut Outcome) -> Result<(), Error> {
    let (vol, _) = load(input, cfg, out)?;
    let rc = cfg.rolling_config();
    let result = with_threads(cfg.threads, || roll(&vol, &rc))??;
    let fmt = nf(cfg);
    let dir = &cfg.out;
    match cfg.format {
        OutputFormat::Csv => {
            export::write_rolling_total_csv(create(&dir.join("rolling_total.csv"), out)?, &result, fmt)?;
            for (name, m) in [("from", Measure::From), ("to", Measure::To), ("net", Measure::Net)] {
                export::write_rolling_measure_csv(create(&dir.join(format!("rolling_{name}.csv")), out)?, &result, m, fmt)?;
            }
            export::write_rolling_stability_csv(create(&dir.join("rolling_stability.csv"), out)?, &result)?;
        }
        OutputFormat::Json => write_json(&dir.join("rolling.json"), &export::rolling_json(&result, fmt), out)?,
    }
    if !result.failures.is_empty() {
        export::write_window_failures_csv(create(&dir.join("rolling_failures.csv"), out)?, &result)?;
        let msg = format!("{} of {} windows failed", result.failures.len(), result.n_windows());
        eprintln!("warning: {msg}");
        out.warnings.push(msg);
    }
    Ok(())
}

pub fn cmd_sweep(input: &Path, cfg: &RunConfig, out: &mut Outcome) -> Result<(), Error> {
    let (vol, _) = load(input, cfg, out)?;
    let grid = cfg.sweep_grid();
    let result = with_threads(cfg.threads, || sweep(&vol, &grid))??;
    let fmt = nf(cfg);
    let dir = &cfg.out;
    match cfg.format {
        OutputFormat::Csv => {
            export::write_envelope_csv(create(&dir.join("sweep_envelope.csv"), out)?, &result.envelope, fmt)?;
            export::write_sweep_summary_csv(create(&dir.join("sweep_summary.csv"), out)?, &result)?;
            for r in result.successful() {
                let c = &r.config;
                let name = format!("total_W{}_H{}_p{}.csv", c.window, c.horizon, c.var_spec.lag_order);
                export::write_rolling_total_csv(create(&dir.join("sweep").join(name), out)?, r, fmt)?;
            }
        }
        OutputFormat::Json => write_json(&dir.join("sweep.json"), &export::sweep_json(&result, fmt), out)?,
    }
    let failed: Vec<_> = result.failed().collect();
    if !failed.is_empty() {
        let mut w = csv::Writer::from_writer(create(&dir.join("sweep_failures.csv"), out)?);
        w.write_record(["window", "horizon", "lag", "error"]).map_err(|e| Error::Output(e.to_string()))?;
        for (c, e) in &failed {
            w.write_record([
                c.window.to_string(),
                c.horizon.to_string(),
                c.var_spec.lag_order.to_string(),
                e.to_string(),
            ])
            .map_err(|e| Error::Output(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::Output(e.to_string()))?;
        let msg = format!("{} of {} combinations failed", failed.len(), result.runs.len());
        eprintln!("warning: {msg}");
        out.warnings.push(msg);
    }
    if let Some(spread) = result.max_spread() {
        eprintln!("max spread of total connectedness across the grid: {spread:.4} percentage points");
    }
    Ok(())
}
