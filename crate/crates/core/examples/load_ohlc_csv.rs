//! Loading a long-form OHLC file: alignment, exclusions and the load report.

use std::io::Write;

use spillnet::prelude::*;

const ROWS: &str = "\
series_id,date,open,high,low,close
Bank,2021-01-04,100,102,99,101
Bank,2021-01-05,101,103,100,102
Bank,2021-01-06,102,102.5,98,99
Bank,2021-01-07,99,101,98.5,100.5
Mining,2021-01-04,50,51,49.5,50.5
Mining,2021-01-05,50.5,52,50,51.8
Mining,2021-01-07,51.8,52.2,50.9,51
";

pub fn run() -> spillnet::Result<()> {
    let dir = std::env::temp_dir().join(format!("spillnet-load-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|source| spillnet::Error::Io { path: dir.clone(), source })?;
    let path = dir.join("bars.csv");
    let mut file = std::fs::File::create(&path).map_err(|source| spillnet::Error::Io { path: path.clone(), source })?;
    file.write_all(ROWS.as_bytes()).map_err(|source| spillnet::Error::Io { path: path.clone(), source })?;

    let config = IngestConfig {
        min_dates: 2,
        max_drop_fraction: 0.5,
        exclusion_dates: vec![chrono::NaiveDate::from_ymd_opt(2021, 1, 4).unwrap()],
        ..IngestConfig::default()
    };
    let (panel, report) = load_panel(&path, &config)?;
    println!("{}", report.summary());
    let vol = panel_volatility(&panel);
    for (i, id) in vol.series_ids().iter().enumerate() {
        let cells: Vec<String> = vol.row(i).iter().map(|v| format!("{v:.3e}")).collect();
        println!("{id:>7}: {}", cells.join("  "));
    }
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}

#[allow(dead_code)]
fn main() -> spillnet::Result<()> {
    run()
}
