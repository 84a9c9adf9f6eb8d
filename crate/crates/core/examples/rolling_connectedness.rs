//! Rolling-window total connectedness across a change in shock correlation.

use spillnet::prelude::*;
use spillnet::synthetic;

pub fn run() -> spillnet::Result<()> {
    let days = 1000;
    let vol = synthetic::two_regime_panel(5, days, 8);
    let config = RollingConfig {
        window: 150,
        step: 5,
        var_spec: VarSpec::new(1),
        horizon: 10,
    };
    let result = roll(&vol, &config)?;
    println!("{} windows, {} failed", result.n_windows(), result.failures.len());

    // window k covers observations [k * step, k * step + window)
    let start = |k: usize| k * config.step;
    let mean_where = |keep: &dyn Fn(usize) -> bool| {
        let v: Vec<f64> = (0..result.n_windows()).filter(|&k| keep(k)).filter_map(|k| result.total_pct[k]).collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    let calm = mean_where(&|k| start(k) + config.window <= days / 2);
    let stress = mean_where(&|k| start(k) >= days / 2);
    println!("mean total, calm windows:   {calm:.2}%");
    println!("mean total, stress windows: {stress:.2}%");
    Ok(())
}

#[allow(dead_code)]
fn main() -> spillnet::Result<()> {
    run()
}
