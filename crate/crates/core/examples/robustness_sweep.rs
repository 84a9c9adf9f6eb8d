//! Sensitivity of rolling total connectedness to window, horizon and lag.

use spillnet::prelude::*;
use spillnet::synthetic;

pub fn run() -> spillnet::Result<()> {
    let vol = synthetic::sector_volatility_panel(5, 700, 13);
    let grid = SweepGrid {
        windows: vec![180, 200],
        horizons: vec![5, 10],
        lags: vec![1, 2],
        step: 10,
        include_intercept: true,
    };
    let result = sweep(&vol, &grid)?;
    for run in &result.runs {
        let c = &run.config;
        match &run.outcome {
            Ok(r) => {
                let last = r.total_pct.iter().rev().flatten().next().copied().unwrap_or(f64::NAN);
                println!("W={} H={:>2} p={}  {} windows, last total {last:.2}", c.window, c.horizon, c.var_spec.lag_order, r.n_windows());
            }
            Err(e) => println!("W={} H={:>2} p={}  failed: {e}", c.window, c.horizon, c.var_spec.lag_order),
        }
    }
    if let Some(spread) = result.max_spread() {
        println!("largest spread across the grid: {spread:.2} points");
    }
    let point = &result.envelope[result.envelope.len() / 2];
    println!("{}: min {:.2} median {:.2} max {:.2}", point.date, point.min, point.median, point.max);
    Ok(())
}

#[allow(dead_code)]
fn main() -> spillnet::Result<()> {
    run()
}
