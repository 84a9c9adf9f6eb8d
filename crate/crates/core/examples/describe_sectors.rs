//! Summary statistics and ADF unit-root tests for each volatility series.

use spillnet::prelude::*;
use spillnet::synthetic;

pub fn run() -> spillnet::Result<()> {
    let vol = synthetic::sector_volatility_panel(6, 800, 11);
    println!("{:>5} {:>10} {:>10} {:>8} {:>8} {:>9}", "id", "mean", "std", "skew", "kurt", "ADF");
    for (i, id) in vol.series_ids().iter().enumerate() {
        let s: DescriptiveStats = describe(&vol.row(i), 2)?;
        let star = if s.adf_significant_1pct { "***" } else { "" };
        println!(
            "{id:>5} {:>10.3e} {:>10.3e} {:>8.3} {:>8.3} {:>9.2}{star}",
            s.mean, s.std, s.skewness, s.kurtosis, s.adf_statistic
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> spillnet::Result<()> {
    run()
}
