//! Grows a preferential-attachment overlay and prints its shape.
//!
//! `cargo run --example topology_stats -- [peers] [m] [seed]`

use fd_topk::topology::{
    average_degree, coverage_ttl, generate_topology, reachable_set, TopologyConfig,
};

fn main() -> fd_topk::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let n = args.first().copied().unwrap_or(1000) as usize;
    let m = args.get(1).copied().unwrap_or(2) as usize;
    let seed = args.get(2).copied().unwrap_or(1);

    let g = generate_topology(&TopologyConfig::new(n, m, seed))?;
    println!(
        "peers {}  edges {}  max degree {}",
        g.node_count(),
        g.edge_count(),
        g.max_degree()
    );
    println!("average degree {:.3}", average_degree(&g, g.peers())?);

    let origin = 0;
    let cov = coverage_ttl(&g, origin)?;
    println!("coverage ttl from peer {origin}: {cov}");
    for ttl in 1..=cov {
        let ball = reachable_set(&g, origin, ttl)?;
        println!("  ttl {ttl:>2}: {:>6} peers", ball.len());
    }
    Ok(())
}
