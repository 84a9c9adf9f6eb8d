//! CSV, JSON and DOT writers for every result type, plus a reader for
//! connectedness tables in the exported layout.
//!
//! Numbers print at full round-trip precision unless two-decimal output is
//! requested. Missing values (failed windows) print as empty CSV fields and
//! JSON `null`.

use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use serde_json::{json, Value};

use crate::connect::{ConnectednessTable, NetPairwiseMatrix};
use crate::error::{Error, FevdError, StatsError};
use crate::fevd::FevdMatrix;
use crate::ingest::stats::DescriptiveStats;
use crate::ingest::SeriesInfo;
use crate::netgraph::{PageRankScores, SpilloverNetwork};
use crate::rolling::{EnvelopePoint, RollingResult, SweepResult};
use crate::var::VarModel;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NumberFormat {
    pub two_decimals: bool,
}

impl NumberFormat {
    pub fn full() -> Self {
        Self { two_decimals: false }
    }

    pub fn fmt(&self, v: f64) -> String {
        if v.is_nan() {
            String::new()
        } else if self.two_decimals {
            format!("{v:.2}")
        } else {
            format!("{v}")
        }
    }

    pub fn opt(&self, v: Option<f64>) -> String {
        v.map(|v| self.fmt(v)).unwrap_or_default()
    }

    fn json(&self, v: f64) -> Value {
        if !v.is_finite() {
            Value::Null
        } else if self.two_decimals {
            json!((v * 100.0).round() / 100.0)
        } else {
            json!(v)
        }
    }

    fn json_vec<'a>(&self, values: impl IntoIterator<Item = &'a f64>) -> Value {
        Value::Array(values.into_iter().map(|v| self.json(*v)).collect())
    }

    fn json_matrix(&self, m: &DMatrix<f64>) -> Value {
        Value::Array(m.row_iter().map(|r| self.json_vec(r.iter())).collect())
    }
}

fn out_err(e: impl std::fmt::Display) -> Error {
    Error::Output(e.to_string())
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().flexible(true).from_writer(w)
}

fn write_rows<W: Write>(w: W, rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), Error> {
    let mut wtr = csv_writer(w);
    for row in rows {
        wtr.write_record(&row).map_err(out_err)?;
    }
    wtr.flush().map_err(out_err)
}

/// One row per series: id, name, code, the nine statistics and a status
/// column (`ok` or the reason the row is empty).
pub fn write_descriptive_csv<W: Write>(
    w: W,
    rows: &[(SeriesInfo, Result<DescriptiveStats, StatsError>)],
    nf: NumberFormat,
) -> Result<(), Error> {
    let header = [
        "series_id",
        "name",
        "code",
        "mean",
        "median",
        "max",
        "min",
        "std",
        "skewness",
        "kurtosis",
        "adf_statistic",
        "adf_significant_1pct",
        "status",
    ];
    let mut out = vec![header.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    for (info, stats) in rows {
        let mut row = vec![
            info.id.clone(),
            info.name.clone().unwrap_or_default(),
            info.code.clone().unwrap_or_default(),
        ];
        match stats {
            Ok(s) => {
                row.extend(
                    [s.mean, s.median, s.max, s.min, s.std, s.skewness, s.kurtosis, s.adf_statistic]
                        .iter()
                        .map(|v| nf.fmt(*v)),
                );
                row.push(s.adf_significant_1pct.to_string());
                row.push("ok".into());
            }
            Err(e) => {
                row.extend(std::iter::repeat(String::new()).take(9));
                row.push(match e {
                    StatsError::Degenerate => "degenerate".to_string(),
                    other => other.to_string(),
                });
            }
        }
        out.push(row);
    }
    write_rows(w, out)
}

/// Normalized decomposition in fractions: rows receive, columns send.
pub fn write_fevd_csv<W: Write>(w: W, fevd: &FevdMatrix, nf: NumberFormat) -> Result<(), Error> {
    let mut rows = vec![std::iter::once("receiver".to_string()).chain(fevd.series_ids.iter().cloned()).collect()];
    for (i, id) in fevd.series_ids.iter().enumerate() {
        rows.push(
            std::iter::once(id.clone())
                .chain(fevd.normalized.row(i).iter().map(|v| nf.fmt(*v)))
                .collect(),
        );
    }
    write_rows(w, rows)
}

/// Full connectedness table: pairwise percentages with a `from` column, a
/// `to` row ending in the total, and a `net` row.
pub fn write_connectedness_csv<W: Write>(w: W, table: &ConnectednessTable, nf: NumberFormat) -> Result<(), Error> {
    let ids = table.series_ids();
    let pct = table.pairwise_pct();
    let mut rows: Vec<Vec<String>> = Vec::with_capacity(ids.len() + 3);
    rows.push(
        std::iter::once("receiver".to_string())
            .chain(ids.iter().cloned())
            .chain(std::iter::once("from".to_string()))
            .collect(),
    );
    for (i, id) in ids.iter().enumerate() {
        rows.push(
            std::iter::once(id.clone())
                .chain(pct.row(i).iter().map(|v| nf.fmt(*v)))
                .chain(std::iter::once(nf.fmt(table.from_pct[i])))
                .collect(),
        );
    }
    rows.push(
        std::iter::once("to".to_string())
            .chain(table.to_pct.iter().map(|v| nf.fmt(*v)))
            .chain(std::iter::once(nf.fmt(table.total_pct)))
            .collect(),
    );
    rows.push(
        std::iter::once("net".to_string())
            .chain(table.net_pct.iter().map(|v| nf.fmt(*v)))
            .chain(std::iter::once(String::new()))
            .collect(),
    );
    write_rows(w, rows)
}

/// A connectedness table read back from the exported CSV layout.
#[derive(Debug, Clone, PartialEq)]
pub struct PrintedTable {
    pub series_ids: Vec<String>,
    /// Pairwise entries in percent.
    pub pairwise_pct: DMatrix<f64>,
    pub from_pct: DVector<f64>,
    pub to_pct: DVector<f64>,
    pub net_pct: DVector<f64>,
    pub total_pct: f64,
}

impl PrintedTable {
    /// Decomposition built from the pairwise entries (rows re-normalized).
    pub fn to_fevd(&self, horizon: usize) -> Result<FevdMatrix, FevdError> {
        FevdMatrix::from_shares(self.series_ids.clone(), horizon, &self.pairwise_pct / 100.0)
    }
}

pub fn read_connectedness_csv<R: Read>(r: R) -> Result<PrintedTable, Error> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(r);
    let header = rdr.headers().map_err(out_err)?.clone();
    let n = header.len().checked_sub(2).ok_or_else(|| out_err("table header too short"))?;
    let series_ids: Vec<String> = header.iter().skip(1).take(n).map(String::from).collect();
    let records: Vec<csv::StringRecord> = rdr.records().collect::<Result<_, _>>().map_err(out_err)?;
    if records.len() != n + 2 {
        return Err(out_err(format!("expected {} rows, found {}", n + 2, records.len())));
    }
    let num = |rec: &csv::StringRecord, k: usize| -> Result<f64, Error> {
        let field = rec.get(k).unwrap_or("");
        field
            .parse::<f64>()
            .map_err(|_| out_err(format!("row '{}': bad number '{field}'", rec.get(0).unwrap_or(""))))
    };
    let mut pairwise_pct = DMatrix::zeros(n, n);
    let mut from_pct = DVector::zeros(n);
    for (i, rec) in records[..n].iter().enumerate() {
        if rec.get(0) != Some(series_ids[i].as_str()) {
            return Err(out_err(format!("row {} is labeled '{}', expected '{}'", i + 1, rec.get(0).unwrap_or(""), series_ids[i])));
        }
        for j in 0..n {
            pairwise_pct[(i, j)] = num(rec, j + 1)?;
        }
        from_pct[i] = num(rec, n + 1)?;
    }
    let to_rec = &records[n];
    let net_rec = &records[n + 1];
    let mut to_pct = DVector::zeros(n);
    let mut net_pct = DVector::zeros(n);
    for j in 0..n {
        to_pct[j] = num(to_rec, j + 1)?;
        net_pct[j] = num(net_rec, j + 1)?;
    }
    Ok(PrintedTable {
        series_ids,
        pairwise_pct,
        from_pct,
        to_pct,
        net_pct,
        total_pct: num(to_rec, n + 1)?,
    })
}

/// `source,target,weight_pct`
pub fn write_edges_csv<W: Write>(w: W, net: &SpilloverNetwork, nf: NumberFormat) -> Result<(), Error> {
    let header = vec!["source".to_string(), "target".into(), "weight_pct".into()];
    let rows = std::iter::once(header).chain(
        net.edge_list()
            .into_iter()
            .map(|(s, t, wt)| vec![s.to_string(), t.to_string(), nf.fmt(wt)]),
    );
    write_rows(w, rows)
}

/// `id,net_pct,role,pagerank`
pub fn write_nodes_csv<W: Write>(w: W, net: &SpilloverNetwork, pr: Option<&PageRankScores>, nf: NumberFormat) -> Result<(), Error> {
    let header = vec!["id".to_string(), "net_pct".into(), "role".into(), "pagerank".into()];
    let rows = std::iter::once(header).chain(net.nodes.iter().enumerate().map(|(k, node)| {
        vec![
            node.id.clone(),
            nf.fmt(node.net_pct),
            node.role.as_str().to_string(),
            pr.map(|p| format!("{}", p.scores[k])).unwrap_or_default(),
        ]
    }));
    write_rows(w, rows)
}

/// Net-pairwise matrix in percent, same orientation as the decomposition.
pub fn write_net_pairwise_csv<W: Write>(w: W, npm: &NetPairwiseMatrix, nf: NumberFormat) -> Result<(), Error> {
    let mut rows = vec![std::iter::once("receiver".to_string()).chain(npm.series_ids.iter().cloned()).collect()];
    for (i, id) in npm.series_ids.iter().enumerate() {
        rows.push(
            std::iter::once(id.clone())
                .chain(npm.values.row(i).iter().map(|v| nf.fmt(*v)))
                .collect(),
        );
    }
    write_rows(w, rows)
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz description. Transmitters are red, receivers blue; node width
/// scales with |net| and edge pen width with the edge weight.
pub fn write_dot<W: Write>(mut w: W, net: &SpilloverNetwork, name: &str) -> Result<(), Error> {
    let max_net = net.nodes.iter().map(|n| n.net_pct.abs()).fold(0.0, f64::max);
    let max_w = net.edges.iter().map(|e| e.weight_pct).fold(0.0, f64::max);
    let mut s = format!("digraph {} {{\n", dot_id(name));
    s.push_str("  node [shape=circle, style=filled, fontcolor=white];\n");
    for node in &net.nodes {
        let size = if max_net > 0.0 {
            0.3 + 1.2 * node.net_pct.abs() / max_net
        } else {
            0.5
        };
        let color = match node.role {
            crate::netgraph::Role::Transmitter => "red",
            crate::netgraph::Role::Receiver => "blue",
        };
        s.push_str(&format!(
            "  {} [fillcolor={color}, width={size:.3}, net_pct={}];\n",
            dot_id(&node.id),
            node.net_pct
        ));
    }
    for e in &net.edges {
        let pen = if max_w > 0.0 { 0.5 + 4.5 * e.weight_pct / max_w } else { 1.0 };
        s.push_str(&format!(
            "  {} -> {} [penwidth={pen:.3}, weight_pct={}];\n",
            dot_id(&net.nodes[e.source].id),
            dot_id(&net.nodes[e.target].id),
            e.weight_pct
        ));
    }
    s.push_str("}\n");
    w.write_all(s.as_bytes()).map_err(out_err)
}

/// `window_end_date,total_pct`
pub fn write_rolling_total_csv<W: Write>(w: W, r: &RollingResult, nf: NumberFormat) -> Result<(), Error> {
    let header = vec!["window_end_date".to_string(), "total_pct".into()];
    let rows = std::iter::once(header).chain(
        r.window_end_dates
            .iter()
            .zip(&r.total_pct)
            .map(|(d, v)| vec![d.to_string(), nf.opt(*v)]),
    );
    write_rows(w, rows)
}

/// Wide per-series file for one measure: `window_end_date,<prefix>_<id>...`
pub fn write_rolling_measure_csv<W: Write>(w: W, r: &RollingResult, measure: crate::connect::Measure, nf: NumberFormat) -> Result<(), Error> {
    let (prefix, m) = match measure {
        crate::connect::Measure::From => ("from", &r.from_pct),
        crate::connect::Measure::To => ("to", &r.to_pct),
        crate::connect::Measure::Net => ("net", &r.net_pct),
    };
    let header = std::iter::once("window_end_date".to_string())
        .chain(r.series_ids.iter().map(|id| format!("{prefix}_{id}")))
        .collect();
    let rows = std::iter::once(header).chain(r.window_end_dates.iter().enumerate().map(|(k, d)| {
        std::iter::once(d.to_string())
            .chain(m.column(k).iter().map(|v| nf.fmt(*v)))
            .collect()
    }));
    write_rows(w, rows)
}

/// `window_end_date,stable,max_companion_modulus`; empty in failed windows.
pub fn write_rolling_stability_csv<W: Write>(w: W, r: &RollingResult) -> Result<(), Error> {
    let header = vec!["window_end_date".to_string(), "stable".into(), "max_companion_modulus".into()];
    let rows = std::iter::once(header).chain(r.window_end_dates.iter().enumerate().map(|(k, d)| {
        vec![
            d.to_string(),
            r.unstable_flags[k].map(|u| (!u).to_string()).unwrap_or_default(),
            r.max_companion_modulus[k].map(|m| m.to_string()).unwrap_or_default(),
        ]
    }));
    write_rows(w, rows)
}

/// `window_index,window_end_date,error`
pub fn write_window_failures_csv<W: Write>(w: W, r: &RollingResult) -> Result<(), Error> {
    let header = vec!["window_index".to_string(), "window_end_date".into(), "error".into()];
    let rows = std::iter::once(header).chain(
        r.failures
            .iter()
            .map(|f| vec![f.index.to_string(), f.end_date.to_string(), f.error.clone()]),
    );
    write_rows(w, rows)
}

/// `date,min,median,max`
pub fn write_envelope_csv<W: Write>(w: W, envelope: &[EnvelopePoint], nf: NumberFormat) -> Result<(), Error> {
    let header = vec!["date".to_string(), "min".into(), "median".into(), "max".into()];
    let rows = std::iter::once(header).chain(
        envelope
            .iter()
            .map(|p| vec![p.date.to_string(), nf.fmt(p.min), nf.fmt(p.median), nf.fmt(p.max)]),
    );
    write_rows(w, rows)
}

/// One row per grid combination with its status.
pub fn write_sweep_summary_csv<W: Write>(w: W, s: &SweepResult) -> Result<(), Error> {
    let header: Vec<String> = ["window", "horizon", "lag", "windows", "failed_windows", "unstable_windows", "status", "error"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows = std::iter::once(header).chain(s.runs.iter().map(|run| {
        let c = &run.config;
        let mut row = vec![c.window.to_string(), c.horizon.to_string(), c.var_spec.lag_order.to_string()];
        match &run.outcome {
            Ok(r) => row.extend([
                r.n_windows().to_string(),
                r.failures.len().to_string(),
                r.unstable_flags.iter().filter(|f| **f == Some(true)).count().to_string(),
                "ok".to_string(),
                String::new(),
            ]),
            Err(e) => row.extend([String::new(), String::new(), String::new(), "failed".to_string(), e.to_string()]),
        }
        row
    }));
    write_rows(w, rows)
}

#[derive(Serialize)]
struct ModelDump<'a> {
    series_ids: &'a [String],
    lag_order: usize,
    include_intercept: bool,
    effective_sample: usize,
    stable: bool,
    max_companion_modulus: f64,
    intercept: Vec<f64>,
    coefficients: Vec<Vec<Vec<f64>>>,
    coefficient_std_errors: Vec<Vec<Vec<f64>>>,
    residual_covariance: Vec<Vec<f64>>,
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn model_json(model: &VarModel) -> Value {
    let dump = ModelDump {
        series_ids: &model.series_ids,
        lag_order: model.spec.lag_order,
        include_intercept: model.spec.include_intercept,
        effective_sample: model.effective_sample,
        stable: model.stable,
        max_companion_modulus: model.max_companion_modulus,
        intercept: model.intercept.iter().copied().collect(),
        coefficients: model.coefficients.iter().map(rows_of).collect(),
        coefficient_std_errors: model.coefficient_std_errors.iter().map(rows_of).collect(),
        residual_covariance: rows_of(&model.residual_covariance),
    };
    serde_json::to_value(dump).expect("model dump serializes")
}

pub fn connectedness_json(table: &ConnectednessTable, nf: NumberFormat) -> Value {
    json!({
        "series_ids": table.series_ids(),
        "horizon": table.fevd.horizon,
        "pairwise_pct": nf.json_matrix(&table.pairwise_pct()),
        "from_pct": nf.json_vec(table.from_pct.iter()),
        "to_pct": nf.json_vec(table.to_pct.iter()),
        "net_pct": nf.json_vec(table.net_pct.iter()),
        "self_pct": nf.json_vec(table.self_pct.iter()),
        "total_pct": nf.json(table.total_pct),
    })
}

pub fn network_json(net: &SpilloverNetwork, pr: Option<&PageRankScores>, nf: NumberFormat) -> Value {
    json!({
        "nodes": net.nodes.iter().enumerate().map(|(k, n)| json!({
            "id": n.id,
            "net_pct": nf.json(n.net_pct),
            "role": n.role.as_str(),
            "pagerank": pr.map(|p| json!(p.scores[k])).unwrap_or(Value::Null),
        })).collect::<Vec<_>>(),
        "edges": net.edge_list().into_iter().map(|(s, t, w)| json!({
            "source": s, "target": t, "weight_pct": nf.json(w),
        })).collect::<Vec<_>>(),
        "pagerank_iterations": pr.map(|p| p.iterations_used),
        "damping": pr.map(|p| p.damping),
    })
}

pub fn rolling_json(r: &RollingResult, nf: NumberFormat) -> Value {
    let per_series = |m: &DMatrix<f64>| -> Value {
        r.series_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), nf.json_vec(m.row(i).iter())))
            .collect::<serde_json::Map<_, _>>()
            .into()
    };
    json!({
        "config": r.config,
        "window_end_dates": r.window_end_dates,
        "total_pct": r.total_pct.iter().map(|v| v.map(|v| nf.json(v)).unwrap_or(Value::Null)).collect::<Vec<_>>(),
        "from_pct": per_series(&r.from_pct),
        "to_pct": per_series(&r.to_pct),
        "net_pct": per_series(&r.net_pct),
        "unstable": r.unstable_flags,
        "max_companion_modulus": r.max_companion_modulus,
        "failures": r.failures,
    })
}

pub fn sweep_json(s: &SweepResult, nf: NumberFormat) -> Value {
    json!({
        "runs": s.runs.iter().map(|run| json!({
            "window": run.config.window,
            "horizon": run.config.horizon,
            "lag": run.config.var_spec.lag_order,
            "status": if run.outcome.is_ok() { "ok" } else { "failed" },
            "error": run.outcome.as_ref().err().map(|e| e.to_string()),
            "window_end_dates": run.outcome.as_ref().ok().map(|r| &r.window_end_dates),
            "total_pct": run.outcome.as_ref().ok().map(|r| r.total_pct.iter().map(|v| v.map(|v| nf.json(v)).unwrap_or(Value::Null)).collect::<Vec<_>>()),
        })).collect::<Vec<_>>(),
        "envelope": s.envelope.iter().map(|p| json!({
            "date": p.date, "min": nf.json(p.min), "median": nf.json(p.median), "max": nf.json(p.max), "count": p.count,
        })).collect::<Vec<_>>(),
        "max_spread": s.max_spread(),
    })
}
