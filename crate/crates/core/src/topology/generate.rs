use rand::Rng;

use super::TopologyGraph;
use crate::seed::{self, TAG_TOPOLOGY};
use crate::{Error, PeerId, Result};

/// Parameters of the preferential-attachment generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopologyConfig {
    pub node_count: usize,
    /// Edges each newly added peer creates towards existing peers.
    pub attachment_edges: usize,
    pub seed: u64,
}

impl TopologyConfig {
    pub fn new(node_count: usize, attachment_edges: usize, seed: u64) -> Self {
        Self {
            node_count,
            attachment_edges,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_count == 0 {
            return Err(Error::InvalidTopology(
                "node count must be at least 1".into(),
            ));
        }
        if self.attachment_edges == 0 {
            return Err(Error::InvalidTopology(
                "attachment edges must be at least 1".into(),
            ));
        }
        if self.attachment_edges >= self.node_count {
            return Err(Error::InvalidTopology(format!(
                "attachment edges ({}) must be below node count ({})",
                self.attachment_edges, self.node_count
            )));
        }
        Ok(())
    }
}

/// Barabási–Albert growth: a clique of `m + 1` seed peers, then every new
/// peer links to `m` distinct existing peers chosen with probability
/// proportional to their degree.
///
/// The result is connected and has `m(m+1)/2 + (n - m - 1) m` edges, so the
/// mean degree tends to `2m`.
pub fn generate_topology(config: &TopologyConfig) -> Result<TopologyGraph> {
    config.validate()?;
    let n = config.node_count;
    let m = config.attachment_edges;
    let mut rng = seed::rng(config.seed, &[TAG_TOPOLOGY, n as u64, m as u64]);

    let mut adjacency: Vec<Vec<PeerId>> = vec![Vec::new(); n];
    // Each peer appears here once per incident edge endpoint.
    let mut endpoints: Vec<PeerId> = Vec::with_capacity(2 * m * n);
    for u in 0..=m as PeerId {
        for v in u + 1..=m as PeerId {
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
            endpoints.extend([u, v]);
        }
    }

    let mut targets: Vec<PeerId> = Vec::with_capacity(m);
    for new in (m + 1) as PeerId..n as PeerId {
        targets.clear();
        while targets.len() < m {
            let pick = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&pick) {
                targets.push(pick);
            }
        }
        for &t in &targets {
            adjacency[new as usize].push(t);
            adjacency[t as usize].push(new);
            endpoints.extend([new, t]);
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    Ok(TopologyGraph::from_sorted_adjacency(adjacency))
}
