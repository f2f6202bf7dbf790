//! Overlay topologies: the undirected peer graph, a preferential-attachment
//! generator, degree statistics and TTL-bounded reachability.

mod generate;
mod text;

use std::collections::{BTreeSet, VecDeque};

pub use generate::{generate_topology, TopologyConfig};

use crate::{Error, PeerId, Result};

/// Undirected overlay graph with sorted adjacency lists.
///
/// Symmetric, no self-loops, no parallel edges. These hold for every value
/// that can be constructed through the public API.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyGraph {
    adjacency: Vec<Vec<PeerId>>,
    edge_count: usize,
}

impl TopologyGraph {
    /// Builds a graph on `node_count` peers from an undirected edge list.
    pub fn from_edges(
        node_count: usize,
        edges: impl IntoIterator<Item = (PeerId, PeerId)>,
    ) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); node_count];
        for (u, v) in edges {
            if u as usize >= node_count {
                return Err(Error::UnknownPeer(u));
            }
            if v as usize >= node_count {
                return Err(Error::UnknownPeer(v));
            }
            if u == v {
                return Err(Error::InvalidTopology(format!("self-loop on peer {u}")));
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        let mut edge_count = 0;
        for (p, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            if list.len() != before {
                return Err(Error::InvalidTopology(format!(
                    "duplicate edge at peer {p}"
                )));
            }
            edge_count += list.len();
        }
        Ok(Self {
            adjacency,
            edge_count: edge_count / 2,
        })
    }

    pub(crate) fn from_sorted_adjacency(adjacency: Vec<Vec<PeerId>>) -> Self {
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        Self {
            adjacency,
            edge_count,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, peer: PeerId) -> &[PeerId] {
        &self.adjacency[peer as usize]
    }

    pub fn degree(&self, peer: PeerId) -> usize {
        self.adjacency[peer as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn contains(&self, peer: PeerId) -> bool {
        (peer as usize) < self.adjacency.len()
    }

    pub fn has_edge(&self, u: PeerId, v: PeerId) -> bool {
        self.contains(u) && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn peers(&self) -> impl Iterator<Item = PeerId> + '_ {
        (0..self.adjacency.len()).map(|p| p as PeerId)
    }

    /// Every edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (PeerId, PeerId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let u = u as PeerId;
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Number of edges with both endpoints in `peers`.
    pub fn induced_edge_count(&self, peers: &BTreeSet<PeerId>) -> usize {
        peers
            .iter()
            .map(|&p| {
                self.neighbors(p)
                    .iter()
                    .filter(|&&q| p < q && peers.contains(&q))
                    .count()
            })
            .sum()
    }

    /// Hop distance from `origin` to every peer; `None` when unreachable.
    pub fn hop_distances(&self, origin: PeerId) -> Result<Vec<Option<u32>>> {
        if !self.contains(origin) {
            return Err(Error::UnknownPeer(origin));
        }
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::from([origin]);
        dist[origin as usize] = Some(0);
        while let Some(p) = queue.pop_front() {
            let d = dist[p as usize].unwrap_or_default();
            for &q in self.neighbors(p) {
                if dist[q as usize].is_none() {
                    dist[q as usize] = Some(d + 1);
                    queue.push_back(q);
                }
            }
        }
        Ok(dist)
    }
}

/// Mean degree over `peers`, degrees counted in the full graph.
pub fn average_degree<I>(graph: &TopologyGraph, peers: I) -> Result<f64>
where
    I: IntoIterator,
    I::Item: std::borrow::Borrow<PeerId>,
{
    let mut count = 0usize;
    let mut total = 0usize;
    for p in peers {
        let p = *std::borrow::Borrow::borrow(&p);
        if !graph.contains(p) {
            return Err(Error::UnknownPeer(p));
        }
        count += 1;
        total += graph.degree(p);
    }
    if count == 0 {
        return Err(Error::EmptyPeerSet);
    }
    Ok(total as f64 / count as f64)
}

/// The origin plus every peer within `ttl` hops of it.
pub fn reachable_set(graph: &TopologyGraph, origin: PeerId, ttl: u32) -> Result<BTreeSet<PeerId>> {
    let dist = graph.hop_distances(origin)?;
    Ok(dist
        .iter()
        .enumerate()
        .filter(|(_, d)| matches!(d, Some(d) if *d <= ttl))
        .map(|(p, _)| p as PeerId)
        .collect())
}

/// Smallest TTL that reaches every peer from `origin` (its eccentricity).
pub fn coverage_ttl(graph: &TopologyGraph, origin: PeerId) -> Result<u32> {
    let dist = graph.hop_distances(origin)?;
    let unreachable = dist.iter().filter(|d| d.is_none()).count();
    if unreachable > 0 {
        return Err(Error::Disconnected {
            origin,
            unreachable,
        });
    }
    Ok(dist.into_iter().flatten().max().unwrap_or(0))
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn path(n: usize) -> TopologyGraph {
        TopologyGraph::from_edges(n, (1..n as PeerId).map(|v| (v - 1, v))).unwrap()
    }

    pub fn cycle(n: usize) -> TopologyGraph {
        TopologyGraph::from_edges(n, (0..n as PeerId).map(|v| (v, (v + 1) % n as PeerId))).unwrap()
    }

    pub fn star(leaves: usize) -> TopologyGraph {
        TopologyGraph::from_edges(leaves + 1, (1..=leaves as PeerId).map(|v| (0, v))).unwrap()
    }

    pub fn complete(n: usize) -> TopologyGraph {
        let n = n as PeerId;
        TopologyGraph::from_edges(
            n as usize,
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))),
        )
        .unwrap()
    }
}
