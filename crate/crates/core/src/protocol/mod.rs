//! The FD per-peer protocol: query forward, local execution,
//! merge-and-backward and data retrieval, with the forwarding strategies,
//! statistics heuristics and churn extensions.

mod message;
mod peer;
mod query;
mod scorelist;
mod stats;
mod wait;

use std::collections::BTreeMap;

pub use message::{
    forward_bytes, score_list_bytes, ListKind, Message, ResultItem, FORWARD_FIXED_BYTES,
    HEADER_BYTES, PEER_ID_BYTES, RETRIEVE_COUNT_BYTES,
};
pub use peer::{
    answer_retrieval, local_score_list, Action, DropReason, PeerEnv, PeerState, Phase, Retrieval,
    Timer, MAX_URGENT_HOPS,
};
pub use query::{Algorithm, HeuristicConfig, QueryDescriptor, QueryId, Strategy};
pub use scorelist::{entry_order, merge_score_lists, ScoreEntry, ScoreList, ENTRY_BYTES};
pub use stats::{
    select_neighbors_heuristic, update_statistics, NeighborRecord, StatisticsStore, TemplateKey,
};
pub use wait::{compute_wait_time, WaitTimeParams};

use crate::{Error, PeerId, Result};

/// Number of items to request so that, when each is inaccessible with
/// probability `p`, `k` are expected to remain: `ceil(k / (1 - p))`.
pub fn inflate_k(k: u32, p: f64) -> Result<u32> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let exact = k as f64 / (1.0 - p);
    // Absorb rounding noise such as 20 / 0.7 = 28.571..., 20 / (1 - 0.5) = 40.000...1.
    let inflated = (exact - 1e-9).ceil().max(k as f64);
    Ok(inflated.min(u32::MAX as f64) as u32)
}

/// How many items to ask each owner for: its multiplicity in the final list.
pub fn build_retrieval_plan(final_list: &ScoreList) -> BTreeMap<PeerId, u32> {
    let mut plan = BTreeMap::new();
    for e in final_list.entries() {
        *plan.entry(e.owner).or_insert(0) += 1;
    }
    plan
}
