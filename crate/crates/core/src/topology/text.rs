//! Plain-text graph fixtures: a `nodes <N> edges <M>` header followed by one
//! `u v` line per edge with `u < v`.

use std::fmt::Write as _;
use std::str::FromStr;

use super::TopologyGraph;
use crate::{Error, PeerId, Result};

impl TopologyGraph {
    pub fn to_text(&self) -> String {
        let mut out = format!("nodes {} edges {}\n", self.node_count(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let err = |line: usize, msg: &str| Error::GraphParse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (nodes, edges) = match fields.as_slice() {
            ["nodes", n, "edges", m] => (
                n.parse::<usize>().map_err(|_| err(1, "bad node count"))?,
                m.parse::<usize>().map_err(|_| err(1, "bad edge count"))?,
            ),
            _ => return Err(err(1, "expected `nodes <N> edges <M>`")),
        };
        let mut list = Vec::with_capacity(edges);
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut next = || -> Result<PeerId> {
                parts
                    .next()
                    .and_then(|s| PeerId::from_str(s).ok())
                    .ok_or_else(|| err(lineno, "expected two peer ids"))
            };
            let (u, v) = (next()?, next()?);
            if parts.next().is_some() {
                return Err(err(lineno, "trailing fields"));
            }
            if u >= v {
                return Err(err(lineno, "edge must be written as `u v` with u < v"));
            }
            list.push((u, v));
        }
        if list.len() != edges {
            return Err(err(
                1,
                &format!("header declares {edges} edges, found {}", list.len()),
            ));
        }
        TopologyGraph::from_edges(nodes, list)
    }
}
