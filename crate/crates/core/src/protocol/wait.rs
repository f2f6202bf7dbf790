use std::time::Duration;

use crate::{Error, Result};

/// Per-hop cost bounds used to size a peer's wait for its neighbours'
/// score-lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WaitTimeParams {
    /// Longest time to get the query from a peer to a neighbour.
    pub t_q_snd: Duration,
    /// Local execution budget.
    pub t_exec: Duration,
    /// Longest time to get a full score-list from a peer to its parent.
    pub t_sl_snd: Duration,
    /// Longest merge of received score-lists with the local top scores.
    pub t_merge: Duration,
}

/// `ttl·T_Qsnd + T_exec + ttl·T_SLsnd + (ttl-1)·T_Merge`, where `ttl` is the
/// TTL the peer attached when it sent the query on.
pub fn compute_wait_time(ttl: u32, params: &WaitTimeParams) -> Result<Duration> {
    if ttl < 1 {
        return Err(Error::InvalidTtl(ttl));
    }
    Ok(params.t_q_snd * ttl + params.t_exec + params.t_sl_snd * ttl + params.t_merge * (ttl - 1))
}
