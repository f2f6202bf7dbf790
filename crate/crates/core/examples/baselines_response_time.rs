//! Response time of FD against the two centralized baselines as bandwidth
//! grows.

use fd_topk::datastore::DataGenConfig;
use fd_topk::sim::{Algorithm, Network, SimConfig};
use fd_topk::topology::{generate_topology, TopologyConfig};

fn main() -> fd_topk::Result<()> {
    let seed = 1;
    let graph = generate_topology(&TopologyConfig::new(1000, 2, seed))?;
    let mut net = Network::build(
        graph,
        &DataGenConfig {
            seed,
            ..DataGenConfig::default()
        },
    )?;

    println!(
        "{:>9}  {:>12}  {:>12}  {:>12}",
        "kbps", "fd-basic s", "cnstar s", "cn s"
    );
    for kbps in [28.0, 56.0, 112.0, 224.0] {
        let mut row = Vec::new();
        for algo in [Algorithm::FdBasic, Algorithm::CnStar, Algorithm::Cn] {
            let mut cfg = SimConfig::new(algo, seed);
            cfg.link.bandwidth_mean_kbps = kbps;
            row.push(net.run_query(&cfg)?.report.response_time_ms / 1e3);
        }
        println!(
            "{kbps:>9}  {:>12.1}  {:>12.1}  {:>12.1}",
            row[0], row[1], row[2]
        );
    }
    Ok(())
}
