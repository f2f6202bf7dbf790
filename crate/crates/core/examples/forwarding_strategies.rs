//! Forward-message counts of the three forwarding strategies, next to the
//! closed-form predictions.

use fd_topk::datastore::DataGenConfig;
use fd_topk::metrics::{exact_mfw_basic, exact_mfw_strategy1, predict_mfw_basic};
use fd_topk::sim::{Algorithm, LinkModel, Network, SimConfig};
use fd_topk::topology::{average_degree, generate_topology, reachable_set, TopologyConfig};

fn main() -> fd_topk::Result<()> {
    let seed = 11;
    let graph = generate_topology(&TopologyConfig::new(1000, 2, seed))?;
    let mut net = Network::build(
        graph,
        &DataGenConfig {
            seed,
            ..DataGenConfig::default()
        },
    )?;

    // Waits grow with the TTL, so the long TTL is only paired with instant links.
    let runs = [
        ("default links, ttl = coverage", LinkModel::default(), None),
        (
            "instant links, ttl = 1000",
            LinkModel::instant(),
            Some(1000),
        ),
    ];
    for (label, link, ttl) in runs {
        println!("{label}");
        for algo in [Algorithm::FdBasic, Algorithm::FdStr1, Algorithm::FdStr12] {
            let cfg = SimConfig {
                link,
                ttl,
                ..SimConfig::new(algo, seed)
            };
            let out = net.run_query(&cfg)?;
            println!(
                "  {:<9} mFw {:>5}  totalBytes {:>7}  response {:>8.1} ms  ac {}",
                algo.name(),
                out.report.m_fw,
                out.report.total_bytes,
                out.report.response_time_ms,
                out.report.ac_q
            );
        }
    }

    let g = net.graph();
    let origin = net.origin_for(&SimConfig::new(Algorithm::FdBasic, seed));
    let ball = reachable_set(g, origin, 1000)?;
    let dg = average_degree(g, ball.iter().copied())?;
    println!(
        "predicted basic  (d-1)|P|+1 = {}",
        predict_mfw_basic(dg, ball.len())
    );
    println!(
        "exact basic count          = {}",
        exact_mfw_basic(g, origin, 1000)?
    );
    println!(
        "edges (Strategy 1 count)   = {}",
        exact_mfw_strategy1(g, origin, 1000)?
    );
    Ok(())
}
