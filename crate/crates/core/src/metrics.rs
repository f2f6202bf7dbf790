//! Message counters, the per-query report, the exact top-k oracle, result
//! accuracy and the closed-form cost predictors.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::protocol::{entry_order, Algorithm, Message, ScoreEntry, ENTRY_BYTES, HEADER_BYTES};
use crate::topology::{reachable_set, TopologyGraph};
use crate::{PeerId, Result};

/// Traffic counters over delivered messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counters {
    pub m_fw: u64,
    pub m_bw: u64,
    pub m_rt: u64,
    /// Backward payload bytes: score-list entries (no headers) or, for CN,
    /// item payloads.
    pub b_bw: u64,
    pub total_bytes: u64,
    pub lost_lists: u64,
    pub urgent_lists_sent: u64,
}

impl Counters {
    pub fn record(&mut self, msg: &Message) {
        self.record_kind(msg.kind_name(), msg.accounted_bytes() as u64);
    }

    /// Same as [`Counters::record`], from a trace line's kind and size.
    pub fn record_kind(&mut self, kind: &str, bytes: u64) {
        self.total_bytes += bytes;
        match kind {
            "FORWARD" => self.m_fw += 1,
            "SCORELIST" | "ITEMS" => {
                self.m_bw += 1;
                self.b_bw += bytes - HEADER_BYTES as u64;
            }
            "URGENT" | "DIRECT" => self.urgent_lists_sent += 1,
            "RETRIEVE-REQ" | "RETRIEVE-RESP" => self.m_rt += 1,
            "LOST" => self.lost_lists += 1,
            _ => {}
        }
    }
}

/// Everything measured for one simulated query. One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub seed: u64,
    pub algorithm: Algorithm,
    pub n_peers: usize,
    pub k: u32,
    pub ttl: u32,
    pub m_fw: u64,
    pub m_bw: u64,
    pub m_rt: u64,
    pub b_bw: u64,
    pub total_bytes: u64,
    pub response_time_ms: f64,
    pub ac_q: f64,
    pub lost_lists: u64,
    pub urgent_lists_sent: u64,
}

pub const CSV_COLUMNS: [&str; 14] = [
    "seed",
    "algorithm",
    "nPeers",
    "k",
    "ttl",
    "mFw",
    "mBw",
    "mRt",
    "bBw",
    "totalBytes",
    "responseTimeMs",
    "acQ",
    "lostLists",
    "urgentListsSent",
];

impl MetricsReport {
    pub fn new(
        seed: u64,
        algorithm: Algorithm,
        n_peers: usize,
        k: u32,
        ttl: u32,
        c: &Counters,
    ) -> Self {
        Self {
            seed,
            algorithm,
            n_peers,
            k,
            ttl,
            m_fw: c.m_fw,
            m_bw: c.m_bw,
            m_rt: c.m_rt,
            b_bw: c.b_bw,
            total_bytes: c.total_bytes,
            response_time_ms: 0.0,
            ac_q: 0.0,
            lost_lists: c.lost_lists,
            urgent_lists_sent: c.urgent_lists_sent,
        }
    }

    pub fn csv_header() -> String {
        CSV_COLUMNS.join(",")
    }

    pub fn to_csv_row(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.algorithm,
            self.n_peers,
            self.k,
            self.ttl,
            self.m_fw,
            self.m_bw,
            self.m_rt,
            self.b_bw,
            self.total_bytes,
            self.response_time_ms,
            self.ac_q,
            self.lost_lists,
            self.urgent_lists_sent
        );
        s
    }

    /// Parses the first 14 comma-separated fields of `line`; anything after
    /// them is ignored.
    pub fn from_csv_row(line: &str) -> std::result::Result<Self, String> {
        let f: Vec<&str> = line.trim_end().split(',').collect();
        if f.len() < CSV_COLUMNS.len() {
            return Err(format!(
                "expected {} fields, found {}",
                CSV_COLUMNS.len(),
                f.len()
            ));
        }
        fn num<T: std::str::FromStr>(f: &[&str], i: usize) -> std::result::Result<T, String> {
            f[i].parse()
                .map_err(|_| format!("bad {} value `{}`", CSV_COLUMNS[i], f[i]))
        }
        Ok(Self {
            seed: num(&f, 0)?,
            algorithm: f[1].parse()?,
            n_peers: num(&f, 2)?,
            k: num(&f, 3)?,
            ttl: num(&f, 4)?,
            m_fw: num(&f, 5)?,
            m_bw: num(&f, 6)?,
            m_rt: num(&f, 7)?,
            b_bw: num(&f, 8)?,
            total_bytes: num(&f, 9)?,
            response_time_ms: num(&f, 10)?,
            ac_q: num(&f, 11)?,
            lost_lists: num(&f, 12)?,
            urgent_lists_sent: num(&f, 13)?,
        })
    }
}

/// The `k` best entries held by `peers`, by full concatenation and sort.
pub fn top_k_over<P, F, I>(peers: P, k: usize, scores_of: F) -> Vec<ScoreEntry>
where
    P: IntoIterator<Item = PeerId>,
    F: Fn(PeerId) -> I,
    I: IntoIterator<Item = f64>,
{
    let mut all: Vec<ScoreEntry> = peers
        .into_iter()
        .flat_map(|p| scores_of(p).into_iter().map(move |s| ScoreEntry::new(p, s)))
        .collect();
    all.sort_by(entry_order);
    all.truncate(k);
    all
}

/// Exact answer to a top-k query issued at `origin` with `ttl`, over every
/// peer within `ttl` hops.
pub fn oracle_top_k<F, I>(
    graph: &TopologyGraph,
    origin: PeerId,
    ttl: u32,
    k: usize,
    scores_of: F,
) -> Result<Vec<ScoreEntry>>
where
    F: Fn(PeerId) -> I,
    I: IntoIterator<Item = f64>,
{
    let peers: BTreeSet<PeerId> = reachable_set(graph, origin, ttl)?;
    Ok(top_k_over(peers, k, scores_of))
}

/// `|T_Q ∩ T_r| / |T_r|` with multiset intersection on `(owner, score)`;
/// 0 for an empty `t_r`.
pub fn accuracy(t_q: &[ScoreEntry], t_r: &[ScoreEntry]) -> f64 {
    if t_r.is_empty() {
        return 0.0;
    }
    let mut avail: HashMap<(PeerId, u64), usize> = HashMap::new();
    for e in t_q {
        *avail.entry(e.key()).or_default() += 1;
    }
    let common = t_r
        .iter()
        .filter(|e| match avail.get_mut(&e.key()) {
            Some(n) if *n > 0 => {
                *n -= 1;
                true
            }
            _ => false,
        })
        .count();
    common as f64 / t_r.len() as f64
}

/// Forward messages of basic flooding: `(d(G) - 1)·|P_Q| + 1`.
pub fn predict_mfw_basic(d_g: f64, n_pq: usize) -> f64 {
    (d_g - 1.0) * n_pq as f64 + 1.0
}

/// Forward messages with Strategy 1: one per overlay edge inside `P_Q`.
pub fn predict_mfw_strategy1(edges_in_pq: usize) -> usize {
    edges_in_pq
}

/// Backward bytes when every list is full: `k·L·(|P_Q| - 1)`.
pub fn predict_bbw(k: u64, l: u64, n_pq: u64) -> u64 {
    k * l * n_pq.saturating_sub(1)
}

/// `predict_bbw` with the default entry size.
pub fn predict_bbw_default(k: u64, n_pq: u64) -> u64 {
    predict_bbw(k, ENTRY_BYTES as u64, n_pq)
}

/// Exact basic-flooding forward count for any TTL: every peer closer than
/// `ttl` forwards to all neighbours but its parent, the origin to all.
pub fn exact_mfw_basic(graph: &TopologyGraph, origin: PeerId, ttl: u32) -> Result<u64> {
    let dist = graph.hop_distances(origin)?;
    Ok(graph
        .peers()
        .filter(|&p| matches!(dist[p as usize], Some(d) if d < ttl))
        .map(|p| graph.degree(p) as u64 - u64::from(p != origin))
        .sum())
}

/// Exact Strategy 1 forward count when delays order every edge: one message
/// per edge inside the TTL ball, except edges whose endpoints both sit on
/// the ball's rim (neither forwards).
pub fn exact_mfw_strategy1(graph: &TopologyGraph, origin: PeerId, ttl: u32) -> Result<u64> {
    let dist = graph.hop_distances(origin)?;
    let inside = |p: PeerId| dist[p as usize].filter(|&d| d <= ttl);
    Ok(graph
        .edges()
        .filter(|&(u, v)| match (inside(u), inside(v)) {
            (Some(a), Some(b)) => a < ttl || b < ttl,
            _ => false,
        })
        .count() as u64)
}
