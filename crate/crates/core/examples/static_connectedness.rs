//! Full-sample connectedness: VAR fit, generalized decomposition and the
//! directional table.

use spillnet::prelude::*;
use spillnet::synthetic;

pub fn run() -> spillnet::Result<()> {
    let vol = synthetic::sector_volatility_panel(8, 1500, 5);
    let model = fit_var(&vol, VarSpec::new(2))?;
    println!(
        "VAR({}) on {} observations, max companion modulus {:.3}",
        model.lag_order(),
        model.effective_sample,
        model.max_companion_modulus
    );

    let table = connectedness(&gfevd(&model, 10)?);
    println!("{:>5} {:>8} {:>8} {:>8}", "id", "from", "to", "net");
    for (i, id) in table.series_ids().iter().enumerate() {
        println!("{id:>5} {:>8.2} {:>8.2} {:>8.2}", table.from_pct[i], table.to_pct[i], table.net_pct[i]);
    }
    println!("total connectedness {:.2}%", table.total_pct);

    let top: Vec<String> = rank(&table, Measure::Net).into_iter().take(3).map(|(id, v)| format!("{id} ({v:+.2})")).collect();
    println!("largest net transmitters: {}", top.join(", "));
    Ok(())
}

#[allow(dead_code)]
fn main() -> spillnet::Result<()> {
    run()
}
