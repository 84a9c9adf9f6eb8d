//! Daily Garman-Klass variances from OHLC log-price bars.

use chrono::NaiveDate;
use spillnet::prelude::*;
use spillnet::synthetic;

pub fn run() -> spillnet::Result<()> {
    let day = NaiveDate::from_ymd_opt(2020, 3, 16).unwrap();

    let flat = OhlcBar::new(day, 0.0, 0.0, 0.0, 0.0).unwrap();
    let wide = OhlcBar::new(day, 0.0, 0.02, -0.01, 0.01).unwrap();
    let trend = OhlcBar::new(day, 0.0, 0.03, 0.0, 0.03).unwrap();
    for (label, bar) in [("flat", &flat), ("wide", &wide), ("trend", &trend)] {
        println!("{label:>6}: {:.6e}", garman_klass(bar));
    }

    // the estimator only sees differences of log prices
    let shifted = OhlcBar::new(day, 7.0, 7.02, 6.99, 7.01).unwrap();
    println!("shifted wide bar: {:.6e}", garman_klass(&shifted));

    let bars = synthetic::ohlc_panel(4, 250, 3);
    let vol = panel_volatility(&bars);
    println!("{} series x {} days", vol.n_series(), vol.n_obs());
    for (i, info) in vol.series().iter().enumerate() {
        let row = vol.row(i);
        let mean = row.iter().sum::<f64>() / row.len() as f64;
        println!("{:>4}  mean variance {mean:.3e}", info.id);
    }
    println!("negative values: {}", vol.negative_count());
    Ok(())
}

#[allow(dead_code)]
fn main() -> spillnet::Result<()> {
    run()
}
