//! One FD-Basic query, checked against the centralized answer.

use fd_topk::datastore::DataGenConfig;
use fd_topk::metrics::{accuracy, oracle_top_k};
use fd_topk::sim::{Algorithm, Network, SimConfig};
use fd_topk::topology::{generate_topology, TopologyConfig};

fn main() -> fd_topk::Result<()> {
    let seed = 3;
    let graph = generate_topology(&TopologyConfig::new(500, 2, seed))?;
    let mut net = Network::build(
        graph,
        &DataGenConfig {
            seed,
            ..DataGenConfig::default()
        },
    )?;

    let cfg = SimConfig {
        k: 10,
        ..SimConfig::new(Algorithm::FdBasic, seed)
    };
    let out = net.run_query(&cfg)?;

    let oracle = oracle_top_k(net.graph(), out.origin, out.ttl, 10, |p| {
        net.scores(p).collect::<Vec<_>>()
    })?;
    println!(
        "origin {}  ttl {}  reached {} peers",
        out.origin,
        out.ttl,
        out.reached.len()
    );
    for (i, item) in out.result.iter().enumerate() {
        println!(
            "{:>2}. peer {:>4}  score {:.6}  {} B",
            i + 1,
            item.owner,
            item.score,
            item.payload_bytes
        );
    }
    println!(
        "accuracy vs oracle: {}",
        accuracy(&oracle, &out.result_entries())
    );
    println!("response time {:.1} ms", out.report.response_time_ms);
    println!(
        "{}\n{}",
        fd_topk::metrics::MetricsReport::csv_header(),
        out.report.to_csv_row()
    );
    Ok(())
}
