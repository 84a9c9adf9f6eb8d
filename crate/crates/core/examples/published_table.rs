//! Recomputes the directional measures of a published 28-sector table and
//! ranks its spillover network by PageRank.

use std::path::Path;

use spillnet::export::read_connectedness_csv;
use spillnet::prelude::*;

pub fn run() -> spillnet::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/published_connectedness.csv");
    let file = std::fs::File::open(&path).map_err(|source| spillnet::Error::Io { path: path.clone(), source })?;
    let printed = read_connectedness_csv(file)?;
    let table = connectedness(&printed.to_fevd(10)?);

    let worst = |a: &nalgebra::DVector<f64>, b: &nalgebra::DVector<f64>| (a - b).abs().max();
    println!("max |from - printed| {:.3}", worst(&table.from_pct, &printed.from_pct));
    println!("max |to - printed|   {:.3}", worst(&table.to_pct, &printed.to_pct));
    println!("max |net - printed|  {:.3}", worst(&table.net_pct, &printed.net_pct));
    println!("total {:.2} (printed {:.2})", table.total_pct, printed.total_pct);

    let network = build_network(&net_pairwise(&table.fevd), &table)?;
    let scores = pagerank(&network, 0.85, 1e-12, 1000)?;
    println!("PageRank after {} iterations:", scores.iterations_used);
    for (id, score) in scores.ranking(&network).iter().take(5) {
        println!("  {id:>8} {score:.4}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> spillnet::Result<()> {
    run()
}
