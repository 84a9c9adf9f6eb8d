//! Net pairwise spillover network, its strongest-outgoing-edge subgraph and
//! a Graphviz rendering.

use spillnet::export::write_dot;
use spillnet::prelude::*;
use spillnet::synthetic;

pub fn run() -> spillnet::Result<()> {
    let vol = synthetic::sector_volatility_panel(6, 1200, 21);
    let model = fit_var(&vol, VarSpec::new(2))?;
    let table = connectedness(&gfevd(&model, 10)?);
    let network = build_network(&net_pairwise(&table.fevd), &table)?;

    println!("{} nodes, {} edges", network.nodes.len(), network.edges.len());
    for node in &network.nodes {
        println!("  {:>4} {:+7.2} {}", node.id, node.net_pct, node.role.as_str());
    }

    let strongest = max_out_subgraph(&network);
    println!("strongest outgoing edges:");
    for (source, target, weight) in strongest.edge_list() {
        println!("  {source} -> {target} {weight:.3}");
    }

    let mut dot = Vec::new();
    write_dot(&mut dot, &strongest, "max_outgoing")?;
    print!("{}", String::from_utf8_lossy(&dot));
    Ok(())
}

#[allow(dead_code)]
fn main() -> spillnet::Result<()> {
    run()
}
