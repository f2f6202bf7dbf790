//! Accuracy of FD-Basic and FD-Dynamic as peers leave mid-query.

use fd_topk::datastore::DataGenConfig;
use fd_topk::sim::{Algorithm, ChurnModel, Network, SimConfig};
use fd_topk::topology::{generate_topology, TopologyConfig};

fn main() -> fd_topk::Result<()> {
    let seeds = 1..=5u64;
    println!("lifetime  fd-basic  fd-dynamic  lost(basic)  urgent(dynamic)");
    for minutes in [1.0, 2.0, 4.0, 8.0, 16.0, 60.0] {
        let (mut basic, mut dynamic, mut lost, mut urgent) = (0.0, 0.0, 0, 0);
        for seed in seeds.clone() {
            let graph = generate_topology(&TopologyConfig::new(500, 2, seed))?;
            let mut net = Network::build(
                graph,
                &DataGenConfig {
                    seed,
                    ..DataGenConfig::default()
                },
            )?;
            let churn = ChurnModel::exponential_minutes(minutes);
            let b = net.run_query(&SimConfig {
                churn,
                ..SimConfig::new(Algorithm::FdBasic, seed)
            })?;
            let d = net.run_query(&SimConfig {
                churn,
                ..SimConfig::new(Algorithm::FdDynamic, seed)
            })?;
            basic += b.report.ac_q;
            dynamic += d.report.ac_q;
            lost += b.report.lost_lists;
            urgent += d.report.urgent_lists_sent;
        }
        let n = seeds.clone().count() as f64;
        println!(
            "{minutes:>5} min  {:>8.3}  {:>10.3}  {lost:>11}  {urgent:>15}",
            basic / n,
            dynamic / n
        );
    }
    Ok(())
}
