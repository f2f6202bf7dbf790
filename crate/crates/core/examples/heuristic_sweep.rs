//! Statistics-driven neighbour pruning: traffic and accuracy against `z`.
//!
//! Each `z` gets fresh statistics, three warm-up queries, then the measured one.

use fd_topk::datastore::DataGenConfig;
use fd_topk::protocol::HeuristicConfig;
use fd_topk::sim::{Algorithm, Network, SimConfig};
use fd_topk::topology::{generate_topology, TopologyConfig};

fn main() -> fd_topk::Result<()> {
    let seed = 2;
    let graph = generate_topology(&TopologyConfig::new(1000, 2, seed))?;
    let mut net = Network::build(
        graph,
        &DataGenConfig {
            seed,
            ..DataGenConfig::default()
        },
    )?;

    let plain = net.run_query(&SimConfig::new(Algorithm::FdStr12, seed))?;
    println!(
        "fd-str12 without pruning: {} bytes, ac {}",
        plain.report.total_bytes, plain.report.ac_q
    );

    for z in [0.0, 0.2, 0.4, 0.6, 0.8, 1.0] {
        net.reset_statistics();
        let mut cfg = SimConfig::new(Algorithm::FdStr12Heuristic, seed);
        cfg.heuristic = HeuristicConfig::PositionThreshold { z };
        for q in 0..3 {
            cfg.query_counter = q;
            net.run_query(&cfg)?;
        }
        cfg.query_counter = 3;
        let out = net.run_query(&cfg)?;
        println!(
            "z {z:.1}: {:>7} bytes  mFw {:>5}  reached {:>4}  ac {:.2}",
            out.report.total_bytes,
            out.report.m_fw,
            out.reached.len(),
            out.report.ac_q
        );
    }
    Ok(())
}
